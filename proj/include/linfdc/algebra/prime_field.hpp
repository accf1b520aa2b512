#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace linfdc {

struct AlgebraError : std::domain_error {
  using std::domain_error::domain_error;
};

namespace detail {

inline std::uint64_t mod_add(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  const std::uint64_t s = a + b;
  return (s >= p || s < a) ? s - p : s;
}

inline std::uint64_t mod_sub(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + (p - b);
}

inline std::uint64_t mod_neg(std::uint64_t a, std::uint64_t p) { return a == 0 ? 0 : p - a; }

__extension__ typedef __int128 i128;
__extension__ typedef unsigned __int128 u128;

inline std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % p);
}

inline std::uint64_t mod_pow(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e != 0) {
    if (e & 1U) r = mod_mul(r, a, p);
    a = mod_mul(a, a, p);
    e >>= 1U;
  }
  return r;
}

// Extended Euclid; requires gcd(a, p) = 1.
inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p) {
  if (a % p == 0) throw AlgebraError("inverse of zero in F_" + std::to_string(p));
  i128 t = 0, new_t = 1;
  i128 r = p, new_r = a % p;
  while (new_r != 0) {
    const i128 q = r / new_r;
    const i128 tmp_t = t - q * new_t;
    t = new_t;
    new_t = tmp_t;
    const i128 tmp_r = r - q * new_r;
    r = new_r;
    new_r = tmp_r;
  }
  if (t < 0) t += p;
  return static_cast<std::uint64_t>(t);
}

}  // namespace detail

/// Deterministic Miller-Rabin, exact for all 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  constexpr std::array<std::uint64_t, 12> bases = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t b : bases) {
    if (n % b == 0) return n == b;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (std::uint64_t a : bases) {
    std::uint64_t x = detail::mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = detail::mod_mul(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw AlgebraError("characteristic " + std::to_string(p) + " is not prime");
}

/// Element of the prime field F_p.
class Fp {
 public:
  Fp(std::uint64_t p, std::uint64_t value) : p_(p), value_(value % p) { require_prime(p); }

  std::uint64_t modulus() const { return p_; }
  std::uint64_t value() const { return value_; }
  bool is_zero() const { return value_ == 0; }

  Fp operator+(const Fp& o) const { return {p_, detail::mod_add(value_, check(o).value_, p_), Unchecked{}}; }
  Fp operator-(const Fp& o) const { return {p_, detail::mod_sub(value_, check(o).value_, p_), Unchecked{}}; }
  Fp operator*(const Fp& o) const { return {p_, detail::mod_mul(value_, check(o).value_, p_), Unchecked{}}; }
  Fp operator-() const { return {p_, detail::mod_neg(value_, p_), Unchecked{}}; }
  Fp inverse() const { return {p_, detail::mod_inv(value_, p_), Unchecked{}}; }
  Fp operator/(const Fp& o) const { return *this * check(o).inverse(); }

  bool operator==(const Fp& o) const = default;

 private:
  struct Unchecked {};
  Fp(std::uint64_t p, std::uint64_t value, Unchecked) : p_(p), value_(value) {}

  const Fp& check(const Fp& o) const {
    if (o.p_ != p_) {
      throw AlgebraError("mismatched moduli " + std::to_string(p_) + " and " + std::to_string(o.p_));
    }
    return o;
  }

  std::uint64_t p_;
  std::uint64_t value_;
};

}  // namespace linfdc
