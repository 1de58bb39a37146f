#ifndef EXDECOMP_RATIONAL_HPP_
#define EXDECOMP_RATIONAL_HPP_

#include <cstdint>
#include <string>

namespace exdecomp {

// Exact non-negative-denominator rational over 64-bit integers. Products are
// computed through __int128 so threshold comparisons at desk scale never
// overflow.
class Rational {
 public:
  Rational() = default;
  Rational(int64_t num) : num_(num), den_(1) {}  // NOLINT
  Rational(int64_t num, int64_t den);

  // Parses the shortest decimal representation of `x` exactly, so 0.01 is
  // 1/100 rather than the nearest binary double.
  static Rational from_double(double x);
  static Rational parse(const std::string& s);

  int64_t num() const { return num_; }
  int64_t den() const { return den_; }
  double to_double() const { return static_cast<double>(num_) / den_; }
  std::string str() const;

  int64_t floor() const;
  int64_t ceil() const;
  bool is_integer() const { return den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b);
  friend Rational operator-(const Rational& a, const Rational& b);
  friend Rational operator*(const Rational& a, const Rational& b);
  friend Rational operator/(const Rational& a, const Rational& b);
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend int compare(const Rational& a, const Rational& b);
  friend bool operator<(const Rational& a, const Rational& b) {
    return compare(a, b) < 0;
  }
  friend bool operator<=(const Rational& a, const Rational& b) {
    return compare(a, b) <= 0;
  }
  friend bool operator>(const Rational& a, const Rational& b) {
    return compare(a, b) > 0;
  }
  friend bool operator>=(const Rational& a, const Rational& b) {
    return compare(a, b) >= 0;
  }

 private:
  int64_t num_ = 0;
  int64_t den_ = 1;
};

// floor(sqrt(x)) for x >= 0, exact.
int64_t isqrt(int64_t x);

// floor(sqrt(r) * n / div): the bound shape sqrt(eps0)*n/div used by the
// path-count thresholds.
int64_t floor_sqrt_times(const Rational& r, int64_t n, int64_t div = 1);

}  // namespace exdecomp

#endif  // EXDECOMP_RATIONAL_HPP_
