// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
//
// Angles that stay exact while they are rational multiples of pi.
// Mixing an exact angle with a floating one yields a floating one.
#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <string_view>

namespace qcaflow {

inline constexpr double kPi = std::numbers::pi;

// Representative in (-pi, pi].
double wrap_2pi(double x);
// Representative in (-pi/2, pi/2].
double wrap_pi(double x);
// Distance on the circle of the given period.
double circle_distance(double a, double b, double period);

class Angle {
 public:
  Angle() = default;
  static Angle radians(double r);
  // (p/q) * pi, reduced.
  static Angle pi_fraction(std::int64_t p, std::int64_t q);
  // Accepts "0.37", "pi", "-pi", "2/3 pi", "2/3pi", "2/3*pi", "pi/4",
  // "3pi/4". Throws ConfigError otherwise.
  static Angle parse(std::string_view text);

  bool exact() const { return exact_; }
  std::int64_t num() const { return p_; }
  std::int64_t den() const { return q_; }
  double value() const;

  // Mod 2pi into (-pi, pi].
  Angle normalized() const;
  // Mod `period_over_pi` * pi, e.g. 1 for theta.
  Angle reduced(std::int64_t period_over_pi) const;

  Angle operator+(const Angle& o) const;
  Angle operator-(const Angle& o) const;
  Angle operator-() const;
  Angle operator*(std::int64_t k) const;

  // Equality mod period_over_pi * pi. Exact pairs compare exactly; the
  // tolerance applies otherwise.
  bool equal_mod(const Angle& o, std::int64_t period_over_pi, double tol) const;
  double distance_mod(const Angle& o, std::int64_t period_over_pi) const;

  // "2/3 pi" for exact angles, shortest round-trip decimal otherwise.
  std::string to_string() const;

 private:
  bool exact_ = true;
  std::int64_t p_ = 0;
  std::int64_t q_ = 1;
  double r_ = 0.0;
};

}  // namespace qcaflow
