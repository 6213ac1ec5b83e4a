#pragma once

#include <gmpxx.h>

#include <string>

namespace tateforge {

using Scalar = mpq_class;

// Coefficient field: the rationals (characteristic 0) or F_p. Residues mod p
// are stored as integers in [0, p) inside an mpq_class with denominator 1, so
// one scalar type serves both cases.
class Field {
 public:
  Field() = default;
  explicit Field(unsigned long characteristic);

  static Field rationals() { return Field(); }

  unsigned long characteristic() const { return p_; }
  bool operator==(const Field& o) const { return p_ == o.p_; }

  Scalar from_int(long v) const;
  Scalar from_mpz(const mpz_class& v) const;
  Scalar from_rational(const mpq_class& v) const;

  Scalar add(const Scalar& a, const Scalar& b) const;
  Scalar sub(const Scalar& a, const Scalar& b) const;
  Scalar mul(const Scalar& a, const Scalar& b) const;
  Scalar neg(const Scalar& a) const;
  Scalar inv(const Scalar& a) const;
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }
  Scalar pow(const Scalar& a, unsigned long e) const;

  // acc += a*b
  void addmul(Scalar& acc, const Scalar& a, const Scalar& b) const;
  void normalize(Scalar& a) const;

  static bool is_zero(const Scalar& a) { return sgn(a) == 0; }
  static bool is_one(const Scalar& a) { return a == 1; }

  // binomial(n, k) and n! reduced into the field
  Scalar binomial(unsigned long n, unsigned long k) const;
  Scalar factorial(unsigned long n) const;

  std::string format(const Scalar& a) const;
  std::string name() const;

 private:
  unsigned long p_ = 0;
};

bool is_prime(unsigned long p);

}  // namespace tateforge
