#pragma once

// Scalar fields: GF(p) for word-sized primes and the rationals.

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "nzext/errors.hpp"

namespace nzext {

class PrimeField {
 public:
  using value_type = std::uint32_t;

  explicit PrimeField(std::uint64_t p) : p_(static_cast<std::uint32_t>(p)) {
    if (p < 2 || p > (std::uint64_t{1} << 31) || !is_prime(p)) {
      throw InputError("GF(p) requires a prime p <= 2^31, got " + std::to_string(p));
    }
  }

  std::uint32_t characteristic() const { return p_; }
  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(value_type a) const { return a == 0; }
  bool is_one(value_type a) const { return a == 1; }
  bool eq(value_type a, value_type b) const { return a == b; }

  value_type add(value_type a, value_type b) const {
    std::uint64_t s = std::uint64_t{a} + b;
    return static_cast<value_type>(s >= p_ ? s - p_ : s);
  }
  value_type sub(value_type a, value_type b) const {
    return a >= b ? a - b : static_cast<value_type>(std::uint64_t{a} + p_ - b);
  }
  value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }
  value_type mul(value_type a, value_type b) const {
    return static_cast<value_type>((std::uint64_t{a} * b) % p_);
  }
  value_type inv(value_type a) const {
    if (a == 0) throw Error("division by zero in " + name());
    // Fermat: a^(p-2)
    std::uint64_t result = 1, base = a, e = p_ - 2;
    while (e) {
      if (e & 1) result = result * base % p_;
      base = base * base % p_;
      e >>= 1;
    }
    return static_cast<value_type>(result);
  }

  value_type from_int(std::int64_t v) const {
    std::int64_t r = v % static_cast<std::int64_t>(p_);
    if (r < 0) r += p_;
    return static_cast<value_type>(r);
  }
  /// Accepts decimal integers (possibly negative).
  value_type parse(const std::string& s) const {
    try {
      std::size_t used = 0;
      long long v = std::stoll(s, &used);
      if (used != s.size()) throw InputError("bad scalar '" + s + "'");
      return from_int(v);
    } catch (const std::logic_error&) {
      throw InputError("bad scalar '" + s + "'");
    }
  }
  std::string to_string(value_type a) const { return std::to_string(a); }

  bool operator==(const PrimeField& other) const { return p_ == other.p_; }

 private:
  static bool is_prime(std::uint64_t p) {
    if (p < 4) return p >= 2;
    if (p % 2 == 0) return false;
    for (std::uint64_t d = 3; d * d <= p; d += 2) {
      if (p % d == 0) return false;
    }
    return true;
  }

  std::uint32_t p_;
};

class RationalField {
 public:
  using value_type = mpq_class;

  std::uint32_t characteristic() const { return 0; }
  std::string name() const { return "Q"; }

  value_type zero() const { return 0; }
  value_type one() const { return 1; }
  bool is_zero(const value_type& a) const { return sgn(a) == 0; }
  bool is_one(const value_type& a) const { return a == 1; }
  bool eq(const value_type& a, const value_type& b) const { return a == b; }

  value_type add(const value_type& a, const value_type& b) const { return a + b; }
  value_type sub(const value_type& a, const value_type& b) const { return a - b; }
  value_type neg(const value_type& a) const { return -a; }
  value_type mul(const value_type& a, const value_type& b) const { return a * b; }
  value_type inv(const value_type& a) const {
    if (is_zero(a)) throw Error("division by zero in Q");
    return 1 / a;
  }

  value_type from_int(std::int64_t v) const { return mpq_class(static_cast<long>(v)); }
  /// Accepts "a" or "a/b".
  value_type parse(const std::string& s) const {
    mpq_class q;
    if (q.set_str(s, 10) != 0 || sgn(q.get_den()) == 0) {
      throw InputError("bad rational '" + s + "'");
    }
    q.canonicalize();
    return q;
  }
  std::string to_string(const value_type& a) const { return a.get_str(); }

  bool operator==(const RationalField&) const { return true; }
};

}  // namespace nzext
