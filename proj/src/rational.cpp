#include "bvkit/rational.hpp"

#include <limits>
#include <numeric>
#include <ostream>

#include "bvkit/errors.hpp"

namespace bvkit {

namespace {

using i128 = __int128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

bool fits(i128 v) {
  return v >= std::numeric_limits<int64_t>::min() + 1 && v <= std::numeric_limits<int64_t>::max();
}

mpz_class to_mpz(i128 v) {
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  mpz_class hi(static_cast<unsigned long>(static_cast<uint64_t>(u >> 64)));
  mpz_class lo(static_cast<unsigned long>(static_cast<uint64_t>(u)));
  mpz_class r = (hi << 64) + lo;
  return neg ? mpz_class(-r) : r;
}

}  // namespace

Rational::Rational(long long num, long long den) {
  if (den == 0) throw InputError("rational with zero denominator");
  set_wide(num, den);
}

Rational::Rational(const mpq_class& q) { set_big(q); }

void Rational::set_wide(i128 num, i128 den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  if (fits(num) && fits(den)) {
    n_ = static_cast<int64_t>(num);
    d_ = static_cast<int64_t>(den);
    big_.reset();
    return;
  }
  mpq_class q(to_mpz(num), to_mpz(den));
  q.canonicalize();
  n_ = 0;
  d_ = 1;
  big_ = std::make_shared<const mpq_class>(q);
}

void Rational::set_big(const mpq_class& q) {
  mpq_class c(q);
  c.canonicalize();
  const mpz_class& num = c.get_num();
  const mpz_class& den = c.get_den();
  if (num.fits_slong_p() && den.fits_slong_p() && num != mpz_class(std::numeric_limits<long>::min())) {
    n_ = num.get_si();
    d_ = den.get_si();
    big_.reset();
  } else {
    n_ = 0;
    d_ = 1;
    big_ = std::make_shared<const mpq_class>(c);
  }
}

Rational Rational::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (c != ' ') t.push_back(c);
  if (t.empty()) throw InputError("empty rational literal");
  auto slash = t.find('/');
  auto valid_int = [](const std::string& s) {
    size_t i = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
    if (i >= s.size()) return false;
    for (; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return false;
    return true;
  };
  std::string num = slash == std::string::npos ? t : t.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : t.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den[0] == '-' || den[0] == '+')
    throw InputError("malformed rational literal '" + text + "'");
  if (num[0] == '+') num = num.substr(1);
  mpz_class zn(num), zd(den);
  if (zd == 0) throw InputError("rational literal with zero denominator '" + text + "'");
  Rational r;
  r.set_big(mpq_class(zn, zd));
  return r;
}

int Rational::sign() const {
  if (big_) return sgn(*big_);
  return n_ > 0 ? 1 : (n_ < 0 ? -1 : 0);
}

bool Rational::is_integer() const {
  if (big_) return big_->get_den() == 1;
  return d_ == 1;
}

mpq_class Rational::to_mpq() const {
  if (big_) return *big_;
  return mpq_class(mpz_class(static_cast<long>(n_)), mpz_class(static_cast<long>(d_)));
}

std::string Rational::str() const {
  if (big_) return big_->get_str();
  if (d_ == 1) return std::to_string(n_);
  return std::to_string(n_) + "/" + std::to_string(d_);
}

Rational Rational::operator-() const {
  Rational r(*this);
  if (big_)
    r.set_big(-*big_);
  else
    r.n_ = -n_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  if (big_ || o.big_) {
    set_big(to_mpq() + o.to_mpq());
    return *this;
  }
  if (d_ == 1 && o.d_ == 1) {
    set_wide(static_cast<i128>(n_) + o.n_, 1);
    return *this;
  }
  set_wide(static_cast<i128>(n_) * o.d_ + static_cast<i128>(o.n_) * d_, static_cast<i128>(d_) * o.d_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) { return *this += -o; }

Rational& Rational::operator*=(const Rational& o) {
  if (big_ || o.big_) {
    set_big(to_mpq() * o.to_mpq());
    return *this;
  }
  set_wide(static_cast<i128>(n_) * o.n_, static_cast<i128>(d_) * o.d_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.is_zero()) throw StructuralError("division by zero");
  if (big_ || o.big_) {
    set_big(to_mpq() / o.to_mpq());
    return *this;
  }
  set_wide(static_cast<i128>(n_) * o.d_, static_cast<i128>(d_) * o.n_);
  return *this;
}

bool operator==(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return a.n_ == b.n_ && a.d_ == b.d_;
  if (a.big_ && b.big_) return *a.big_ == *b.big_;
  return false;  // canonical form: a value that fits is never stored big
}

bool operator<(const Rational& a, const Rational& b) {
  if (!a.big_ && !b.big_) return static_cast<i128>(a.n_) * b.d_ < static_cast<i128>(b.n_) * a.d_;
  return a.to_mpq() < b.to_mpq();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

Rational factorial(int n) {
  Rational r(1);
  for (int i = 2; i <= n; ++i) r *= Rational(i);
  return r;
}

Rational binomial(int n, int k) {
  if (k < 0 || k > n) return Rational(0);
  return factorial(n) / (factorial(k) * factorial(n - k));
}

}  // namespace bvkit
