#pragma once

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "linfdc/algebra/prime_field.hpp"

namespace linfdc {

/// Polynomial in F_p[t], coefficients stored lowest degree first. The zero
/// polynomial has no coefficients; otherwise the leading coefficient is
/// nonzero. The modulus is trusted to be prime (checked at ingestion).
class Poly {
 public:
  explicit Poly(std::uint64_t p) : p_(p) {}

  Poly(std::uint64_t p, std::vector<std::uint64_t> coeffs) : p_(p), c_(std::move(coeffs)) {
    for (auto& c : c_) c %= p_;
    trim();
  }

  static Poly constant(std::uint64_t p, std::uint64_t c) { return Poly(p, {c}); }

  static Poly monomial(std::uint64_t p, std::uint64_t c, std::size_t degree) {
    std::vector<std::uint64_t> v(degree + 1, 0);
    v[degree] = c;
    return Poly(p, std::move(v));
  }

  static Poly t(std::uint64_t p) { return monomial(p, 1, 1); }

  std::uint64_t characteristic() const { return p_; }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == 1; }

  /// -1 for the zero polynomial.
  long degree() const { return static_cast<long>(c_.size()) - 1; }

  std::uint64_t coeff(std::size_t i) const { return i < c_.size() ? c_[i] : 0; }
  const std::vector<std::uint64_t>& coeffs() const { return c_; }
  std::uint64_t leading() const { return c_.empty() ? 0 : c_.back(); }

  /// Exponent of the lowest nonzero term; -1 for the zero polynomial.
  long lowest_degree() const {
    for (std::size_t i = 0; i < c_.size(); ++i) {
      if (c_[i] != 0) return static_cast<long>(i);
    }
    return -1;
  }

  bool is_monic() const { return !c_.empty() && c_.back() == 1; }

  Poly monic() const {
    if (is_zero() || is_monic()) return *this;
    return scaled(detail::mod_inv(leading(), p_));
  }

  Poly scaled(std::uint64_t s) const {
    s %= p_;
    Poly r(p_);
    if (s == 0) return r;
    r.c_.resize(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) r.c_[i] = detail::mod_mul(c_[i], s, p_);
    return r;
  }

  Poly shifted(std::size_t k) const {
    if (is_zero()) return *this;
    Poly r(p_);
    r.c_.assign(k, 0);
    r.c_.insert(r.c_.end(), c_.begin(), c_.end());
    return r;
  }

  Poly operator-() const { return scaled(p_ - 1); }

  Poly operator+(const Poly& o) const {
    check(o);
    Poly r(p_);
    r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = detail::mod_add(coeff(i), o.coeff(i), p_);
    r.trim();
    return r;
  }

  Poly operator-(const Poly& o) const {
    check(o);
    Poly r(p_);
    r.c_.resize(std::max(c_.size(), o.c_.size()), 0);
    for (std::size_t i = 0; i < r.c_.size(); ++i) r.c_[i] = detail::mod_sub(coeff(i), o.coeff(i), p_);
    r.trim();
    return r;
  }

  Poly operator*(const Poly& o) const {
    check(o);
    Poly r(p_);
    if (is_zero() || o.is_zero()) return r;
    r.c_.assign(c_.size() + o.c_.size() - 1, 0);
    if (p_ < (std::uint64_t{1} << 31U)) {
      // products fit in 64 bits; reduce lazily
      for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
          r.c_[i + j] = (r.c_[i + j] + c_[i] * o.c_[j]) % p_;
        }
      }
    } else {
      for (std::size_t i = 0; i < c_.size(); ++i) {
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
          r.c_[i + j] = detail::mod_add(r.c_[i + j], detail::mod_mul(c_[i], o.c_[j], p_), p_);
        }
      }
    }
    r.trim();
    return r;
  }

  Poly& operator+=(const Poly& o) { return *this = *this + o; }
  Poly& operator-=(const Poly& o) { return *this = *this - o; }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  /// Euclidean division; throws on division by zero.
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b) {
    a.check(b);
    if (b.is_zero()) throw AlgebraError("polynomial division by zero");
    const std::uint64_t p = a.p_;
    Poly q(p);
    Poly r = a;
    if (r.degree() < b.degree()) return {q, r};
    const std::uint64_t inv_lead = detail::mod_inv(b.leading(), p);
    const std::size_t db = b.c_.size() - 1;
    q.c_.assign(r.c_.size() - db, 0);
    for (std::size_t k = r.c_.size(); k-- > db;) {
      const std::uint64_t coef = detail::mod_mul(r.c_[k], inv_lead, p);
      if (coef == 0) continue;
      const std::size_t shift = k - db;
      q.c_[shift] = coef;
      for (std::size_t j = 0; j <= db; ++j) {
        r.c_[shift + j] = detail::mod_sub(r.c_[shift + j], detail::mod_mul(coef, b.c_[j], p), p);
      }
    }
    q.trim();
    r.trim();
    return {q, r};
  }

  Poly operator/(const Poly& o) const { return divmod(*this, o).first; }
  Poly operator%(const Poly& o) const { return divmod(*this, o).second; }

  /// Monic gcd; gcd(0, 0) = 0.
  static Poly gcd(Poly a, Poly b) {
    a.check(b);
    while (!b.is_zero()) {
      Poly r = divmod(a, b).second;
      a = std::move(b);
      b = std::move(r);
    }
    return a.monic();
  }

  Poly pow(std::uint64_t e) const {
    Poly result = constant(p_, 1);
    Poly base = *this;
    while (e != 0) {
      if (e & 1U) result *= base;
      e >>= 1U;
      if (e != 0) base *= base;
    }
    return result;
  }

  bool operator==(const Poly& o) const { return p_ == o.p_ && c_ == o.c_; }

  /// Total order: by characteristic, then degree, then coefficients from the top.
  std::strong_ordering operator<=>(const Poly& o) const {
    if (auto c = p_ <=> o.p_; c != 0) return c;
    if (auto c = c_.size() <=> o.c_.size(); c != 0) return c;
    for (std::size_t i = c_.size(); i-- > 0;) {
      if (auto c = c_[i] <=> o.c_[i]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

  std::size_t hash() const {
    std::size_t h = std::hash<std::uint64_t>{}(p_);
    for (auto c : c_) h = h * 1000003U ^ std::hash<std::uint64_t>{}(c);
    return h;
  }

  /// Renders as e.g. "t^3+2*t+1"; parseable by the spec expression grammar.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = c_.size(); i-- > 0;) {
      const std::uint64_t c = c_[i];
      if (c == 0) continue;
      if (!out.empty()) out += '+';
      if (i == 0) {
        out += std::to_string(c);
        continue;
      }
      if (c != 1) out += std::to_string(c) + "*";
      out += 't';
      if (i > 1) out += "^" + std::to_string(i);
    }
    return out;
  }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }

  void check(const Poly& o) const {
    if (o.p_ != p_) {
      throw AlgebraError("mismatched characteristics " + std::to_string(p_) + " and " + std::to_string(o.p_));
    }
  }

  std::uint64_t p_;
  std::vector<std::uint64_t> c_;
};

/// Irreducibility over F_p by trial division with all monic polynomials of
/// degree <= deg/2. Exponential in the degree; intended for small places.
inline bool is_irreducible(const Poly& f) {
  const long d = f.degree();
  if (d < 1) return false;
  const std::uint64_t p = f.characteristic();
  for (long k = 1; 2 * k <= d; ++k) {
    // enumerate monic polynomials of degree k via base-p counter
    std::vector<std::uint64_t> low(static_cast<std::size_t>(k), 0);
    while (true) {
      std::vector<std::uint64_t> c = low;
      c.push_back(1);
      if (Poly::divmod(f, Poly(p, c)).second.is_zero()) return false;
      std::size_t i = 0;
      while (i < low.size() && ++low[i] == p) low[i++] = 0;
      if (i == low.size()) break;
    }
  }
  return true;
}

}  // namespace linfdc

template <>
struct std::hash<linfdc::Poly> {
  std::size_t operator()(const linfdc::Poly& p) const { return p.hash(); }
};
