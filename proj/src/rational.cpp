#include "exdecomp/rational.hpp"

#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "exdecomp/errors.hpp"

namespace exdecomp {
namespace {

using i128 = __int128;

int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw InputError("rational overflow");
  }
  return static_cast<int64_t>(v);
}

Rational make(i128 num, i128 den) {
  if (den == 0) throw InputError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 a = num < 0 ? -num : num;
  i128 b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  return Rational(narrow(num), narrow(den));
}

i128 floor_div(i128 a, i128 b) {
  i128 q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

Rational::Rational(int64_t num, int64_t den) {
  if (den == 0) throw InputError("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  int64_t g = std::gcd(num < 0 ? -num : num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  num_ = num;
  den_ = den;
}

Rational Rational::parse(const std::string& s) {
  if (s.empty()) throw InputError("empty rational");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    int64_t a = 0, b = 0;
    auto r1 = std::from_chars(s.data(), s.data() + slash, a);
    auto r2 = std::from_chars(s.data() + slash + 1, s.data() + s.size(), b);
    if (r1.ec != std::errc() || r2.ec != std::errc() ||
        r2.ptr != s.data() + s.size()) {
      throw InputError("malformed rational: " + s);
    }
    return Rational(a, b);
  }
  size_t i = 0;
  bool neg = false;
  if (s[i] == '-' || s[i] == '+') neg = s[i++] == '-';
  i128 num = 0, den = 1;
  bool seen_digit = false, after_point = false;
  int exp10 = 0;
  for (; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') {
      seen_digit = true;
      num = num * 10 + (c - '0');
      if (after_point) den *= 10;
      if (num > (i128{1} << 100)) throw InputError("rational too long: " + s);
    } else if (c == '.' && !after_point) {
      after_point = true;
    } else if (c == 'e' || c == 'E') {
      int e = 0;
      auto r = std::from_chars(s.data() + i + 1, s.data() + s.size(), e);
      if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
        throw InputError("malformed exponent: " + s);
      }
      exp10 = e;
      break;
    } else {
      throw InputError("malformed rational: " + s);
    }
  }
  if (!seen_digit) throw InputError("malformed rational: " + s);
  if (exp10 > 18 || exp10 < -18) throw InputError("exponent out of range: " + s);
  for (; exp10 > 0; --exp10) num *= 10;
  for (; exp10 < 0; ++exp10) den *= 10;
  return make(neg ? -num : num, den);
}

Rational Rational::from_double(double x) {
  if (!std::isfinite(x)) throw InputError("non-finite rational");
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return parse(std::string(buf, r.ptr));
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

int64_t Rational::floor() const { return narrow(floor_div(num_, den_)); }

int64_t Rational::ceil() const { return narrow(-floor_div(-i128{num_}, den_)); }

Rational operator+(const Rational& a, const Rational& b) {
  return make(i128{a.num_} * b.den_ + i128{b.num_} * a.den_,
              i128{a.den_} * b.den_);
}

Rational operator-(const Rational& a, const Rational& b) {
  return make(i128{a.num_} * b.den_ - i128{b.num_} * a.den_,
              i128{a.den_} * b.den_);
}

Rational operator*(const Rational& a, const Rational& b) {
  return make(i128{a.num_} * b.num_, i128{a.den_} * b.den_);
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.num_ == 0) throw InputError("rational division by zero");
  return make(i128{a.num_} * b.den_, i128{a.den_} * b.num_);
}

int compare(const Rational& a, const Rational& b) {
  i128 l = i128{a.num_} * b.den_;
  i128 r = i128{b.num_} * a.den_;
  return l < r ? -1 : (l > r ? 1 : 0);
}

int64_t isqrt(int64_t x) {
  if (x < 0) throw InputError("isqrt of negative");
  auto r = static_cast<int64_t>(std::sqrt(static_cast<long double>(x)));
  while (r > 0 && i128{r} * r > x) --r;
  while (i128{r + 1} * (r + 1) <= x) ++r;
  return r;
}

int64_t floor_sqrt_times(const Rational& r, int64_t n, int64_t div) {
  // floor(sqrt(p/q) * n / div) = floor(sqrt(floor(p n^2 / (q div^2)))).
  i128 p = i128{r.num()} * n * n;
  i128 q = i128{r.den()} * div * div;
  return isqrt(narrow(floor_div(p, q)));
}

}  // namespace exdecomp
