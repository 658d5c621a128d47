#include "growthlab/rational.hpp"

#include <cstdlib>

#include "growthlab/error.hpp"

namespace growthlab {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::SupportTooLarge: return "SupportTooLarge";
    case Errc::OverlappingSupports: return "OverlappingSupports";
    case Errc::ModulusTooLarge: return "ModulusTooLarge";
    case Errc::MonotonicityViolation: return "MonotonicityViolation";
    case Errc::InsufficientPrefix: return "InsufficientPrefix";
    case Errc::EmptyCore: return "EmptyCore";
    case Errc::HeightTooLarge: return "HeightTooLarge";
    case Errc::MalformedConjunct: return "MalformedConjunct";
    case Errc::ClassMismatch: return "ClassMismatch";
    case Errc::SequenceTooLong: return "SequenceTooLong";
    case Errc::EmptyFamily: return "EmptyFamily";
    case Errc::DepthGuard: return "DepthGuard";
    case Errc::HypothesisFailed: return "HypothesisFailed";
    case Errc::SchemaError: return "SchemaError";
    case Errc::ParseError: return "ParseError";
    case Errc::UnknownSuite: return "UnknownSuite";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

Rational::Rational(long long num, long long den) {
  mpq_init(q_);
  if (den == 0) raise(Errc::ParseError, "zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  mpq_set_si(q_, static_cast<long>(num), static_cast<unsigned long>(den));
  mpq_canonicalize(q_);
}

Rational Rational::parse(const std::string& text) {
  Rational r;
  if (text.empty()) raise(Errc::ParseError, "empty rational literal");
  for (char c : text) {
    if (!(c == '-' || c == '/' || (c >= '0' && c <= '9')))
      raise(Errc::ParseError, "bad rational literal '" + text + "'");
  }
  if (mpq_set_str(r.q_, text.c_str(), 10) != 0)
    raise(Errc::ParseError, "bad rational literal '" + text + "'");
  if (mpz_sgn(mpq_denref(r.q_)) == 0)
    raise(Errc::ParseError, "zero denominator in '" + text + "'");
  mpq_canonicalize(r.q_);
  return r;
}

Rational Rational::pow2(long e) {
  Rational r;
  if (e >= 0) {
    mpz_ui_pow_ui(mpq_numref(r.q_), 2u, static_cast<unsigned long>(e));
  } else {
    mpz_ui_pow_ui(mpq_denref(r.q_), 2u, static_cast<unsigned long>(-e));
    mpz_set_ui(mpq_numref(r.q_), 1u);
  }
  return r;
}

Rational Rational::factorial(unsigned long n) {
  Rational r;
  mpz_fac_ui(mpq_numref(r.q_), n);
  return r;
}

Rational Rational::inv_factorial(unsigned long n) {
  Rational r;
  mpz_set_ui(mpq_numref(r.q_), 1u);
  mpz_fac_ui(mpq_denref(r.q_), n);
  return r;
}

Rational Rational::operator+(const Rational& o) const {
  Rational r;
  mpq_add(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator-(const Rational& o) const {
  Rational r;
  mpq_sub(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator*(const Rational& o) const {
  Rational r;
  mpq_mul(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator/(const Rational& o) const {
  if (o.is_zero()) raise(Errc::Internal, "division by zero");
  Rational r;
  mpq_div(r.q_, q_, o.q_);
  return r;
}

Rational Rational::operator-() const {
  Rational r;
  mpq_neg(r.q_, q_);
  return r;
}

Rational Rational::pow(unsigned long e) const {
  Rational acc(1);
  Rational base(*this);
  while (e != 0) {
    if (e & 1u) acc *= base;
    base *= base;
    e >>= 1u;
  }
  return acc;
}

std::uint64_t Rational::to_uint64() const {
  if (!is_integer() || sign() < 0 || !mpz_fits_ulong_p(mpq_numref(q_)))
    raise(Errc::Internal, "value " + str() + " is not a small natural");
  return mpz_get_ui(mpq_numref(q_));
}

Rational Rational::common_denominator(const std::vector<Rational>& values) {
  Rational q(1);
  for (const Rational& v : values)
    mpz_lcm(mpq_numref(q.q_), mpq_numref(q.q_), mpq_denref(v.q_));
  return q;
}

std::string Rational::str() const {
  char* num = mpz_get_str(nullptr, 10, mpq_numref(q_));
  char* den = mpz_get_str(nullptr, 10, mpq_denref(q_));
  std::string out = std::string(num) + "/" + std::string(den);
  std::free(num);
  std::free(den);
  return out;
}

}  // namespace growthlab
