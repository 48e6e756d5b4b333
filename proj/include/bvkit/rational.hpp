#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>

#include <gmpxx.h>

namespace bvkit {

// Exact rational. Values that fit in 64-bit numerator/denominator stay on the
// machine-word path; anything larger is carried by GMP.
class Rational {
 public:
  Rational() = default;
  Rational(int v) : n_(v) {}
  Rational(long v) : n_(v) {}
  Rational(long long v) : n_(v) {}
  Rational(long long num, long long den);
  explicit Rational(const mpq_class& q);

  static Rational parse(const std::string& text);

  bool is_zero() const { return !big_ && n_ == 0; }
  int sign() const;
  bool is_integer() const;

  mpq_class to_mpq() const;
  std::string str() const;

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b);
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b);

  friend std::ostream& operator<<(std::ostream& os, const Rational& r);

 private:
  void set_big(const mpq_class& q);
  void set_wide(__int128 num, __int128 den);

  int64_t n_ = 0;
  int64_t d_ = 1;
  std::shared_ptr<const mpq_class> big_;
};

Rational factorial(int n);
Rational binomial(int n, int k);

}  // namespace bvkit
