#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <utility>

#include "linfdc/algebra/poly.hpp"

namespace linfdc {

/// Element of F_p(t) in canonical form: gcd(num, den) = 1, den monic,
/// zero represented as 0/1. Equal values have identical representations.
class RatFunc {
 public:
  explicit RatFunc(std::uint64_t p) : num_(p), den_(Poly::constant(p, 1)) {}
  explicit RatFunc(Poly num) : num_(std::move(num)), den_(Poly::constant(num_.characteristic(), 1)) {}

  RatFunc(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) { normalize(); }

  static RatFunc zero(std::uint64_t p) { return RatFunc(p); }
  static RatFunc one(std::uint64_t p) { return RatFunc(Poly::constant(p, 1)); }
  static RatFunc constant(std::uint64_t p, std::uint64_t c) { return RatFunc(Poly::constant(p, c)); }
  static RatFunc t(std::uint64_t p) { return RatFunc(Poly::t(p)); }

  std::uint64_t characteristic() const { return num_.characteristic(); }
  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_polynomial() const { return den_.is_one(); }

  RatFunc operator-() const { return RatFunc(-num_, den_, Canonical{}); }

  RatFunc operator+(const RatFunc& o) const {
    if (den_.is_one() && o.den_.is_one()) return RatFunc(num_ + o.num_, den_, Canonical{});
    if (den_ == o.den_) return RatFunc(num_ + o.num_, den_);
    return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }

  RatFunc operator-(const RatFunc& o) const { return *this + (-o); }

  RatFunc operator*(const RatFunc& o) const {
    if (is_zero() || o.is_zero()) return zero(characteristic());
    if (den_.is_one() && o.den_.is_one()) return RatFunc(num_ * o.num_, den_, Canonical{});
    // cross-cancel before multiplying to keep degrees small
    const Poly g1 = Poly::gcd(num_, o.den_);
    const Poly g2 = Poly::gcd(o.num_, den_);
    Poly n = (num_ / g1) * (o.num_ / g2);
    Poly d = (den_ / g2) * (o.den_ / g1);
    return RatFunc(std::move(n), std::move(d), MonicFix{});
  }

  RatFunc inverse() const {
    if (is_zero()) throw AlgebraError("rational function division by zero");
    return RatFunc(den_, num_, MonicFix{});
  }

  RatFunc operator/(const RatFunc& o) const { return *this * o.inverse(); }

  RatFunc& operator+=(const RatFunc& o) { return *this = *this + o; }
  RatFunc& operator-=(const RatFunc& o) { return *this = *this - o; }
  RatFunc& operator*=(const RatFunc& o) { return *this = *this * o; }

  RatFunc pow(long e) const {
    if (e < 0) return inverse().pow(-e);
    return RatFunc(num_.pow(static_cast<std::uint64_t>(e)), den_.pow(static_cast<std::uint64_t>(e)), Canonical{});
  }

  bool operator==(const RatFunc& o) const = default;

  std::strong_ordering operator<=>(const RatFunc& o) const {
    if (auto c = num_ <=> o.num_; c != 0) return c;
    return den_ <=> o.den_;
  }

  std::size_t hash() const { return num_.hash() * 31U ^ den_.hash(); }

  std::string to_string() const {
    if (den_.is_one()) return num_.to_string();
    const auto wrap = [](const Poly& q) {
      const std::string s = q.to_string();
      return s.find_first_of("+*^") == std::string::npos ? s : "(" + s + ")";
    };
    return wrap(num_) + "/" + wrap(den_);
  }

 private:
  struct Canonical {};
  struct MonicFix {};

  // inputs already coprime with monic denominator
  RatFunc(Poly num, Poly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  // inputs coprime; only the leading coefficient of den needs fixing
  RatFunc(Poly num, Poly den, MonicFix) : num_(std::move(num)), den_(std::move(den)) {
    if (num_.is_zero()) {
      den_ = Poly::constant(num_.characteristic(), 1);
      return;
    }
    fix_sign();
  }

  void normalize() {
    if (den_.is_zero()) throw AlgebraError("rational function with zero denominator");
    if (num_.characteristic() != den_.characteristic()) throw AlgebraError("mismatched characteristics");
    if (num_.is_zero()) {
      den_ = Poly::constant(num_.characteristic(), 1);
      return;
    }
    const Poly g = Poly::gcd(num_, den_);
    if (!g.is_one()) {
      num_ = num_ / g;
      den_ = den_ / g;
    }
    fix_sign();
  }

  void fix_sign() {
    if (!den_.is_monic()) {
      const std::uint64_t inv = detail::mod_inv(den_.leading(), den_.characteristic());
      num_ = num_.scaled(inv);
      den_ = den_.scaled(inv);
    }
  }

  Poly num_;
  Poly den_;
};

}  // namespace linfdc

template <>
struct std::hash<linfdc::RatFunc> {
  std::size_t operator()(const linfdc::RatFunc& r) const { return r.hash(); }
};
