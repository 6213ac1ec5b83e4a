#include "tateforge/field.hpp"

#include "tateforge/errors.hpp"

namespace tateforge {

bool is_prime(unsigned long p) {
  if (p < 2) return false;
  for (unsigned long d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

Field::Field(unsigned long characteristic) : p_(characteristic) {
  if (p_ != 0 && !is_prime(p_))
    throw InvalidInput("field characteristic " + std::to_string(p_) + " is not prime");
}

void Field::normalize(Scalar& a) const {
  if (p_ == 0) {
    a.canonicalize();
    return;
  }
  if (a.get_den() != 1) {
    mpz_class d = a.get_den();
    mpz_class m(p_);
    mpz_class di;
    if (mpz_invert(di.get_mpz_t(), d.get_mpz_t(), m.get_mpz_t()) == 0)
      throw InvalidInput("denominator not invertible in " + name());
    mpz_class n = a.get_num() * di;
    a = Scalar(n);
  }
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_num_mpz_t(), p_);
  a = Scalar(r);
}

Scalar Field::from_int(long v) const {
  Scalar s(v);
  normalize(s);
  return s;
}

Scalar Field::from_mpz(const mpz_class& v) const {
  Scalar s(v);
  normalize(s);
  return s;
}

Scalar Field::from_rational(const mpq_class& v) const {
  Scalar s(v);
  normalize(s);
  return s;
}

Scalar Field::add(const Scalar& a, const Scalar& b) const {
  Scalar r = a + b;
  if (p_ != 0 && r.get_num() >= p_) r -= p_;
  return r;
}

Scalar Field::sub(const Scalar& a, const Scalar& b) const {
  Scalar r = a - b;
  if (p_ != 0 && sgn(r) < 0) r += p_;
  return r;
}

Scalar Field::mul(const Scalar& a, const Scalar& b) const {
  Scalar r = a * b;
  if (p_ != 0) normalize(r);
  return r;
}

Scalar Field::neg(const Scalar& a) const {
  if (p_ == 0) return -a;
  if (sgn(a) == 0) return a;
  return Scalar(p_) - a;
}

Scalar Field::inv(const Scalar& a) const {
  if (sgn(a) == 0) throw InvalidInput("division by zero");
  if (p_ == 0) return 1 / a;
  mpz_class r;
  mpz_class m(p_);
  mpz_invert(r.get_mpz_t(), a.get_num_mpz_t(), m.get_mpz_t());
  return Scalar(r);
}

Scalar Field::pow(const Scalar& a, unsigned long e) const {
  Scalar r(1);
  Scalar b = a;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

void Field::addmul(Scalar& acc, const Scalar& a, const Scalar& b) const {
  acc += a * b;
  if (p_ != 0) normalize(acc);
}

Scalar Field::binomial(unsigned long n, unsigned long k) const {
  mpz_class r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return from_mpz(r);
}

Scalar Field::factorial(unsigned long n) const {
  mpz_class r;
  mpz_fac_ui(r.get_mpz_t(), n);
  return from_mpz(r);
}

std::string Field::format(const Scalar& a) const { return a.get_str(); }

std::string Field::name() const { return p_ == 0 ? "Q" : "F" + std::to_string(p_); }

}  // namespace tateforge
