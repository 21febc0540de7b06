#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <string>
#include <utility>

#include "nchilb/errors.hpp"

namespace nchilb {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

enum class FieldKind { Rationals, PrimeField };

namespace detail {

inline bool is_prime_u32(std::uint64_t p) {
  if (p < 2) return false;
  if (p % 2 == 0) return p == 2;
  if (p % 3 == 0) return p == 3;
  for (std::uint64_t d = 5; d * d <= p; d += 6) {
    if (p % d == 0 || p % (d + 2) == 0) return false;
  }
  return true;
}

}  // namespace detail

// The base field: Q or F_p for a prime p <= 2^31.
class ScalarField {
public:
  static ScalarField rationals() { return ScalarField(FieldKind::Rationals, 0); }

  static ScalarField prime_field(std::uint64_t p) {
    if (p > (std::uint64_t{1} << 31) || !detail::is_prime_u32(p)) {
      throw DomainError("prime_field: modulus " + std::to_string(p) +
                        " is not a prime <= 2^31");
    }
    return ScalarField(FieldKind::PrimeField, static_cast<std::uint32_t>(p));
  }

  FieldKind kind() const { return kind_; }
  std::uint32_t characteristic() const { return characteristic_; }
  bool is_rationals() const { return kind_ == FieldKind::Rationals; }
  bool is_prime_field() const { return kind_ == FieldKind::PrimeField; }

  friend bool operator==(const ScalarField& a, const ScalarField& b) = default;

  std::string to_string() const {
    return is_rationals() ? "Q" : "F_" + std::to_string(characteristic_);
  }

private:
  ScalarField(FieldKind kind, std::uint32_t characteristic)
      : kind_(kind), characteristic_(characteristic) {}

  FieldKind kind_;
  std::uint32_t characteristic_;
};

inline void require_same_field(const ScalarField& a, const ScalarField& b,
                               const char* where) {
  if (!(a == b)) {
    throw FieldMismatchError(std::string(where) + ": operands over " +
                             a.to_string() + " and " + b.to_string());
  }
}

// An exact scalar: a reduced fraction over Q, or a canonical residue in
// [0, p) over F_p. Immutable in spirit; every operation returns a new value.
class Value {
public:
  static Value zero(const ScalarField& f) { return of_integer(f, 0); }
  static Value one(const ScalarField& f) { return of_integer(f, 1); }

  static Value of_integer(const ScalarField& f, std::int64_t v) {
    if (f.is_rationals()) return Value(f, Rational(v), 0);
    std::int64_t p = f.characteristic();
    std::int64_t r = v % p;
    if (r < 0) r += p;
    return Value(f, Rational(), static_cast<std::uint32_t>(r));
  }

  // Coerces an exact rational into the field. Over F_p the denominator must
  // be invertible.
  static Value of_rational(const ScalarField& f, const Rational& r) {
    if (f.is_rationals()) return Value(f, r, 0);
    std::uint32_t p = f.characteristic();
    std::uint32_t num = mod_p(numerator(r), p);
    std::uint32_t den = mod_p(denominator(r), p);
    if (den == 0) {
      throw DomainError("of_rational: denominator of " + r.str() +
                        " vanishes mod " + std::to_string(p));
    }
    return residue(f, mul_mod(num, inv_mod(den, p), p));
  }

  static Value residue(const ScalarField& f, std::uint32_t r) {
    if (!f.is_prime_field()) throw DomainError("residue: field is not F_p");
    if (r >= f.characteristic()) throw DomainError("residue: value out of [0, p)");
    return Value(f, Rational(), r);
  }

  const ScalarField& field() const { return field_; }

  bool is_zero() const {
    return field_.is_rationals() ? rat_.is_zero() : res_ == 0;
  }
  bool is_one() const {
    return field_.is_rationals() ? rat_ == 1 : res_ == 1;
  }

  const Rational& rational() const {
    if (!field_.is_rationals()) throw DomainError("rational(): value is not over Q");
    return rat_;
  }
  std::uint32_t residue_value() const {
    if (!field_.is_prime_field()) throw DomainError("residue_value(): value is not over F_p");
    return res_;
  }

  friend Value operator+(const Value& a, const Value& b) {
    require_same_field(a.field_, b.field_, "Value::operator+");
    if (a.field_.is_rationals()) return Value(a.field_, a.rat_ + b.rat_, 0);
    std::uint64_t p = a.field_.characteristic();
    return Value(a.field_, Rational(),
                 static_cast<std::uint32_t>((std::uint64_t{a.res_} + b.res_) % p));
  }

  friend Value operator-(const Value& a, const Value& b) {
    require_same_field(a.field_, b.field_, "Value::operator-");
    if (a.field_.is_rationals()) return Value(a.field_, a.rat_ - b.rat_, 0);
    std::uint64_t p = a.field_.characteristic();
    return Value(a.field_, Rational(),
                 static_cast<std::uint32_t>((std::uint64_t{a.res_} + p - b.res_) % p));
  }

  friend Value operator*(const Value& a, const Value& b) {
    require_same_field(a.field_, b.field_, "Value::operator*");
    if (a.field_.is_rationals()) return Value(a.field_, a.rat_ * b.rat_, 0);
    return Value(a.field_, Rational(),
                 mul_mod(a.res_, b.res_, a.field_.characteristic()));
  }

  friend Value operator/(const Value& a, const Value& b) {
    return a * b.inverse();
  }

  Value operator-() const {
    if (field_.is_rationals()) return Value(field_, -rat_, 0);
    std::uint32_t p = field_.characteristic();
    return Value(field_, Rational(), res_ == 0 ? 0 : p - res_);
  }

  Value inverse() const {
    if (is_zero()) throw DomainError("inverse: division by zero");
    if (field_.is_rationals()) return Value(field_, 1 / rat_, 0);
    return Value(field_, Rational(), inv_mod(res_, field_.characteristic()));
  }

  Value pow(std::uint64_t e) const {
    Value acc = one(field_);
    Value base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  friend bool operator==(const Value& a, const Value& b) {
    if (!(a.field_ == b.field_)) return false;
    return a.field_.is_rationals() ? a.rat_ == b.rat_ : a.res_ == b.res_;
  }

  // Total order on values of one field; used only to make canonical-form
  // collections deterministic.
  friend int compare(const Value& a, const Value& b) {
    require_same_field(a.field_, b.field_, "Value::compare");
    if (a.field_.is_rationals()) {
      return a.rat_ < b.rat_ ? -1 : (a.rat_ == b.rat_ ? 0 : 1);
    }
    return a.res_ < b.res_ ? -1 : (a.res_ == b.res_ ? 0 : 1);
  }

  std::string to_string() const {
    if (field_.is_prime_field()) return std::to_string(res_);
    if (denominator(rat_) == 1) return numerator(rat_).str();
    return numerator(rat_).str() + "/" + denominator(rat_).str();
  }

private:
  Value(ScalarField f, Rational rat, std::uint32_t res)
      : field_(f), rat_(std::move(rat)), res_(res) {}

  static std::uint32_t mod_p(const BigInt& v, std::uint32_t p) {
    BigInt r = v % p;
    if (r < 0) r += p;
    return static_cast<std::uint32_t>(r);
  }

  static std::uint32_t mul_mod(std::uint32_t a, std::uint32_t b, std::uint32_t p) {
    return static_cast<std::uint32_t>((std::uint64_t{a} * b) % p);
  }

  static std::uint32_t inv_mod(std::uint32_t a, std::uint32_t p) {
    // Extended Euclid on (a, p); a is nonzero mod the prime p.
    std::int64_t t = 0, new_t = 1;
    std::int64_t r = p, new_r = a;
    while (new_r != 0) {
      std::int64_t q = r / new_r;
      t = std::exchange(new_t, t - q * new_t);
      r = std::exchange(new_r, r - q * new_r);
    }
    if (r != 1) throw InternalError("inv_mod: argument not invertible");
    if (t < 0) t += p;
    return static_cast<std::uint32_t>(t);
  }

  ScalarField field_;
  Rational rat_;
  std::uint32_t res_;
};

}  // namespace nchilb
