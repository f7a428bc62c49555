#pragma once

#include <gmpxx.h>

#include <cmath>
#include <string>
#include <string_view>

namespace copekit {

using Rational = mpq_class;

/// Default comparison tolerance of the float backend.
inline constexpr double kDefaultEps = 1e-9;

/// Builds num/den in canonical form.
Rational make_rational(long num, long den = 1);

/// Parses "p", "-p", "p/q" or a plain decimal such as "0.25".
/// Throws std::invalid_argument on malformed text or a zero denominator.
Rational parse_rational(std::string_view text);

/// Canonical text form: "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& x);

inline double to_double(const Rational& x) { return x.get_d(); }
inline double to_double(double x) { return x; }

/// Best rational approximation of x with denominator <= max_den, accepted only
/// when it lies within tol of x. Returns false when no such fraction exists.
bool snap_to_rational(double x, double tol, long max_den, Rational& out);

// Backend-neutral comparisons. The rational overloads ignore eps.
inline bool is_zero(const Rational& x, double /*eps*/) { return sgn(x) == 0; }
inline bool is_zero(double x, double eps) { return std::abs(x) <= eps; }
inline bool near_equal(const Rational& a, const Rational& b, double /*eps*/) { return a == b; }
inline bool near_equal(double a, double b, double eps) { return std::abs(a - b) <= eps; }
inline bool is_nonneg(const Rational& x, double /*eps*/) { return sgn(x) >= 0; }
inline bool is_nonneg(double x, double eps) { return x >= -eps; }
inline bool is_positive(const Rational& x, double /*eps*/) { return sgn(x) > 0; }
inline bool is_positive(double x, double eps) { return x > eps; }

}  // namespace copekit
