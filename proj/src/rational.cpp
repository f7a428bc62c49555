#include "copekit/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace copekit {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::invalid_argument("rational with zero denominator");
  Rational q(num, den);
  q.canonicalize();
  return q;
}

namespace {

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char ch : s)
    if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
  return true;
}

mpz_class parse_integer(std::string_view s) {
  bool negative = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    negative = s.front() == '-';
    s.remove_prefix(1);
  }
  if (!all_digits(s)) throw std::invalid_argument("malformed integer '" + std::string(s) + "'");
  mpz_class z(std::string(s), 10);
  return negative ? mpz_class(-z) : z;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw std::invalid_argument("empty rational");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    mpz_class num = parse_integer(text.substr(0, slash));
    mpz_class den = parse_integer(text.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("rational with zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = text.substr(dot + 1);
    bool negative = !whole.empty() && whole.front() == '-';
    if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
    if (whole.empty()) whole = "0";
    if (!all_digits(whole) || (!frac.empty() && !all_digits(frac)))
      throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
    mpz_class scale = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
    mpz_class num = mpz_class(std::string(whole), 10) * scale;
    if (!frac.empty()) num += mpz_class(std::string(frac), 10);
    Rational q(negative ? mpz_class(-num) : num, scale);
    q.canonicalize();
    return q;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& x) {
  if (x.get_den() == 1) return x.get_num().get_str();
  return x.get_num().get_str() + "/" + x.get_den().get_str();
}

bool snap_to_rational(double x, double tol, long max_den, Rational& out) {
  if (!std::isfinite(x)) return false;
  // Continued-fraction convergents of x.
  long double value = x;
  long h_prev = 1, h = static_cast<long>(std::floor(value));
  long k_prev = 0, k = 1;
  long double rem = value - std::floor(value);
  for (int step = 0; step < 64; ++step) {
    if (std::abs(static_cast<long double>(h) / k - x) <= tol) {
      out = make_rational(h, k);
      return true;
    }
    if (rem < 1e-18L) break;
    long double inv = 1.0L / rem;
    long a = static_cast<long>(std::floor(inv));
    rem = inv - a;
    long h_next = a * h + h_prev;
    long k_next = a * k + k_prev;
    if (k_next > max_den) break;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  return false;
}

}  // namespace copekit
