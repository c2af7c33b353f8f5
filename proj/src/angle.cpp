// Copyright 2026 The qcaflow Authors
// SPDX-License-Identifier: Apache-2.0
#include "qcaflow/angle.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <regex>
#include <string>

#include "qcaflow/errors.hpp"

namespace qcaflow {

double wrap_2pi(double x) {
  double r = std::remainder(x, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

double wrap_pi(double x) {
  double r = std::remainder(x, kPi);
  if (r <= -kPi / 2) r += kPi;
  return r;
}

double circle_distance(double a, double b, double period) {
  return std::abs(std::remainder(a - b, period));
}

namespace {

constexpr std::int64_t kDenCap = std::int64_t{1} << 40;

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

Angle Angle::radians(double r) {
  Angle a;
  a.exact_ = false;
  a.r_ = r;
  return a;
}

Angle Angle::pi_fraction(std::int64_t p, std::int64_t q) {
  if (q == 0) throw ConfigError("angle denominator is zero");
  if (q < 0) {
    p = -p;
    q = -q;
  }
  const std::int64_t g = std::gcd(p < 0 ? -p : p, q);
  Angle a;
  a.p_ = g ? p / g : 0;
  a.q_ = g ? q / g : 1;
  if (a.q_ > kDenCap) return radians(static_cast<double>(p) / q * kPi);
  return a;
}

double Angle::value() const {
  return exact_ ? static_cast<double>(p_) / static_cast<double>(q_) * kPi : r_;
}

Angle Angle::reduced(std::int64_t period_over_pi) const {
  if (!exact_) {
    const double period = period_over_pi * kPi;
    double r = std::remainder(r_, period);
    if (r <= -period / 2) r += period;
    return radians(r);
  }
  // p/q mod k, mapped into (-k/2, k/2].
  const std::int64_t m = period_over_pi * q_;
  std::int64_t p = floor_mod(p_, m);
  if (2 * p > m) p -= m;
  return pi_fraction(p, q_);
}

Angle Angle::normalized() const { return reduced(2); }

Angle Angle::operator+(const Angle& o) const {
  if (exact_ && o.exact_) {
    const std::int64_t l = std::lcm(q_, o.q_);
    if (l > 0 && l <= kDenCap) {
      __int128 p = static_cast<__int128>(p_) * (l / q_) +
                   static_cast<__int128>(o.p_) * (l / o.q_);
      if (p < std::numeric_limits<std::int64_t>::max() &&
          p > std::numeric_limits<std::int64_t>::min())
        return pi_fraction(static_cast<std::int64_t>(p), l).normalized();
    }
  }
  return radians(value() + o.value());
}

Angle Angle::operator-() const {
  if (exact_) return pi_fraction(-p_, q_);
  return radians(-r_);
}

Angle Angle::operator-(const Angle& o) const { return *this + (-o); }

Angle Angle::operator*(std::int64_t k) const {
  if (exact_) {
    const __int128 p = static_cast<__int128>(p_) * k;
    if (p < std::numeric_limits<std::int64_t>::max() &&
        p > std::numeric_limits<std::int64_t>::min())
      return pi_fraction(static_cast<std::int64_t>(p), q_).normalized();
  }
  return radians(value() * static_cast<double>(k));
}

double Angle::distance_mod(const Angle& o, std::int64_t period_over_pi) const {
  const Angle d = (*this - o).reduced(period_over_pi);
  return std::abs(d.value());
}

bool Angle::equal_mod(const Angle& o, std::int64_t period_over_pi, double tol) const {
  const Angle d = (*this - o).reduced(period_over_pi);
  if (d.exact_) return d.p_ == 0;
  return std::abs(d.value()) < tol;
}

std::string Angle::to_string() const {
  if (exact_) {
    if (p_ == 0) return "0";
    std::string s = std::to_string(p_);
    if (q_ != 1) s += "/" + std::to_string(q_);
    return s + " pi";
  }
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, r_);
  return std::string(buf, res.ptr);
}

Angle Angle::parse(std::string_view text) {
  const std::string s(text);
  static const std::regex frac_pi(
      R"(^\s*([+-]?)\s*(\d+)?\s*(?:/\s*(\d+))?\s*\*?\s*pi\s*$)");
  static const std::regex pi_over(
      R"(^\s*([+-]?)\s*(\d+)?\s*\*?\s*pi\s*/\s*(\d+)\s*$)");
  std::smatch m;
  auto to_i = [](const std::ssub_match& g, std::int64_t dflt) {
    return g.matched ? std::stoll(g.str()) : dflt;
  };
  try {
    if (std::regex_match(s, m, frac_pi) || std::regex_match(s, m, pi_over)) {
      const std::int64_t sign = m[1].str() == "-" ? -1 : 1;
      return pi_fraction(sign * to_i(m[2], 1), to_i(m[3], 1));
    }
  } catch (const std::out_of_range&) {
    throw ConfigError("angle '" + s + "' overflows the rational form");
  }
  double v = 0.0;
  const char* b = s.data();
  const char* e = s.data() + s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(*b))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(e[-1]))) --e;
  if (b < e && *b == '+') ++b;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v))
    throw ConfigError("cannot parse angle '" + s +
                      "' (expected radians or 'p/q pi')");
  return radians(v);
}

}  // namespace qcaflow
