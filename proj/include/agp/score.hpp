/*
 * Copyright 2026 The Abstract Grammar Parser Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef AGP_SCORE_HPP
#define AGP_SCORE_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <stdexcept>
#include <string_view>

namespace agp {

/**
 * A probability stored as its natural logarithm.
 *
 * Zero is represented exactly as negative infinity and one as 0.0.
 * Multiplication adds log-values; addition uses the log-sum-exp identity
 * so that sums of values <= 1 never overflow.
 */
class LogProb {
public:
  constexpr LogProb() noexcept : log_(-std::numeric_limits<double>::infinity()) {}

  static LogProb from_probability(double p) {
    if (!(p >= 0.0))
      throw std::domain_error("negative or NaN probability");
    return from_log(std::log(p));
  }

  static constexpr LogProb from_log(double log_value) noexcept {
    LogProb r;
    r.log_ = log_value;
    return r;
  }

  static constexpr LogProb zero() noexcept { return LogProb(); }
  static constexpr LogProb one() noexcept { return from_log(0.0); }

  constexpr double log() const noexcept { return log_; }
  double probability() const noexcept { return std::exp(log_); }
  constexpr bool is_zero() const noexcept {
    return log_ == -std::numeric_limits<double>::infinity();
  }

  friend LogProb operator*(LogProb a, LogProb b) noexcept {
    if (a.is_zero() || b.is_zero())
      return zero();
    return from_log(a.log_ + b.log_);
  }

  friend LogProb operator+(LogProb a, LogProb b) noexcept {
    if (a.is_zero())
      return b;
    if (b.is_zero())
      return a;
    const double hi = std::max(a.log_, b.log_);
    const double lo = std::min(a.log_, b.log_);
    return from_log(hi + std::log1p(std::exp(lo - hi)));
  }

  LogProb &operator*=(LogProb other) noexcept { return *this = *this * other; }
  LogProb &operator+=(LogProb other) noexcept { return *this = *this + other; }

  friend constexpr bool operator==(LogProb a, LogProb b) noexcept { return a.log_ == b.log_; }
  friend constexpr bool operator<(LogProb a, LogProb b) noexcept { return a.log_ < b.log_; }

private:
  double log_;
};

inline LogProb log_plus(LogProb a, LogProb b) noexcept { return a + b; }

// A semiring the chart parser can be instantiated with. `log_value` maps a
// score to the log domain for convergence checks; `lift` embeds a grammar
// probability.
template <class S>
concept Semiring = requires(const typename S::value_type &a, const typename S::value_type &b,
                            LogProb p) {
  typename S::value_type;
  { S::zero() } -> std::same_as<typename S::value_type>;
  { S::one() } -> std::same_as<typename S::value_type>;
  { S::plus(a, b) } -> std::same_as<typename S::value_type>;
  { S::times(a, b) } -> std::same_as<typename S::value_type>;
  { S::less(a, b) } -> std::same_as<bool>;
  { S::lift(p) } -> std::same_as<typename S::value_type>;
  { S::log_value(a) } -> std::same_as<double>;
  { S::probability(a) } -> std::same_as<double>;
  { S::name } -> std::convertible_to<std::string_view>;
};

// Sum-product over probabilities: inside scores.
struct InsideSemiring {
  using value_type = LogProb;
  static constexpr std::string_view name = "inside";
  static value_type zero() noexcept { return LogProb::zero(); }
  static value_type one() noexcept { return LogProb::one(); }
  static value_type plus(value_type a, value_type b) noexcept { return a + b; }
  static value_type times(value_type a, value_type b) noexcept { return a * b; }
  static bool less(value_type a, value_type b) noexcept { return a < b; }
  static value_type lift(LogProb p) noexcept { return p; }
  static double log_value(value_type a) noexcept { return a.log(); }
  static double probability(value_type a) noexcept { return a.probability(); }
};

// Max-product: the score of the best derivation.
struct ViterbiSemiring {
  using value_type = LogProb;
  static constexpr std::string_view name = "viterbi";
  static value_type zero() noexcept { return LogProb::zero(); }
  static value_type one() noexcept { return LogProb::one(); }
  static value_type plus(value_type a, value_type b) noexcept { return a < b ? b : a; }
  static value_type times(value_type a, value_type b) noexcept { return a * b; }
  static bool less(value_type a, value_type b) noexcept { return a < b; }
  static value_type lift(LogProb p) noexcept { return p; }
  static double log_value(value_type a) noexcept { return a.log(); }
  static double probability(value_type a) noexcept { return a.probability(); }
};

// Or-and: plain recognition.
struct BooleanSemiring {
  using value_type = bool;
  static constexpr std::string_view name = "bool";
  static value_type zero() noexcept { return false; }
  static value_type one() noexcept { return true; }
  static value_type plus(value_type a, value_type b) noexcept { return a || b; }
  static value_type times(value_type a, value_type b) noexcept { return a && b; }
  static bool less(value_type a, value_type b) noexcept { return !a && b; }
  static value_type lift(LogProb p) noexcept { return !p.is_zero(); }
  static double log_value(value_type a) noexcept {
    return a ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  static double probability(value_type a) noexcept { return a ? 1.0 : 0.0; }
};

static_assert(Semiring<InsideSemiring>);
static_assert(Semiring<ViterbiSemiring>);
static_assert(Semiring<BooleanSemiring>);

// True when two log-values differ by more than `tolerance`. Two equal
// infinities count as unchanged.
inline bool noteworthy_change(double previous_log, double current_log, double tolerance) noexcept {
  if (previous_log == current_log)
    return false;
  return !(std::abs(current_log - previous_log) <= tolerance);
}

} // namespace agp

#endif // AGP_SCORE_HPP
