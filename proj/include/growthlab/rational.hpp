#pragma once

#include <gmp.h>

#include <cstdint>
#include <string>
#include <vector>

namespace growthlab {

// Exact arbitrary-precision rational, always in lowest terms with a positive
// denominator. Every measure, density and bound in the library is one of
// these; nothing anywhere computes in floating point.
class Rational {
public:
  Rational() { mpq_init(q_); }
  Rational(long long n) {
    mpq_init(q_);
    mpq_set_si(q_, static_cast<long>(n), 1u);
    mpq_canonicalize(q_);
  }
  Rational(long long num, long long den);

  Rational(const Rational& o) {
    mpq_init(q_);
    mpq_set(q_, o.q_);
  }
  Rational(Rational&& o) noexcept {
    mpq_init(q_);
    mpq_swap(q_, o.q_);
  }
  Rational& operator=(const Rational& o) {
    if (this != &o) mpq_set(q_, o.q_);
    return *this;
  }
  Rational& operator=(Rational&& o) noexcept {
    mpq_swap(q_, o.q_);
    return *this;
  }
  ~Rational() { mpq_clear(q_); }

  // Parses "p/q" or a bare integer "p"; lowest-terms normalization applied.
  static Rational parse(const std::string& text);

  // 2^e for any integer e.
  static Rational pow2(long e);
  // n! and 1/n!.
  static Rational factorial(unsigned long n);
  static Rational inv_factorial(unsigned long n);

  Rational operator+(const Rational& o) const;
  Rational operator-(const Rational& o) const;
  Rational operator*(const Rational& o) const;
  Rational operator/(const Rational& o) const;
  Rational operator-() const;

  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  Rational pow(unsigned long e) const;

  bool operator==(const Rational& o) const { return mpq_equal(q_, o.q_) != 0; }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const { return mpq_cmp(q_, o.q_) < 0; }
  bool operator<=(const Rational& o) const { return mpq_cmp(q_, o.q_) <= 0; }
  bool operator>(const Rational& o) const { return mpq_cmp(q_, o.q_) > 0; }
  bool operator>=(const Rational& o) const { return mpq_cmp(q_, o.q_) >= 0; }

  int sign() const { return mpq_sgn(q_); }
  bool is_zero() const { return sign() == 0; }
  bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1u) == 0; }

  // Requires a nonnegative integer value that fits in 64 bits.
  std::uint64_t to_uint64() const;

  // Canonical "p/q" (always with the denominator, "0/1" for zero).
  std::string str() const;

  // Least common multiple of the denominators, as an integer value.
  static Rational common_denominator(const std::vector<Rational>& values);

private:
  mpq_t q_;
};

inline Rational operator*(long long n, const Rational& r) {
  return Rational(n) * r;
}

}  // namespace growthlab
