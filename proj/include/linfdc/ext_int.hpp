#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace linfdc {

/// Integer extended by +infinity. Used for valuations (v(0) = +inf) and for
/// distances in pseudometric spaces where infinity glues disjoint unions.
class ExtInt {
 public:
  constexpr ExtInt() = default;
  constexpr ExtInt(std::int64_t v) : value_(v) {}  // NOLINT(google-explicit-constructor)

  static constexpr ExtInt infinity() {
    ExtInt x;
    x.infinite_ = true;
    return x;
  }

  constexpr bool is_infinite() const { return infinite_; }
  constexpr bool is_finite() const { return !infinite_; }

  std::int64_t value() const {
    if (infinite_) throw std::domain_error("ExtInt: value() of infinity");
    return value_;
  }

  friend constexpr ExtInt operator+(ExtInt a, ExtInt b) {
    if (a.infinite_ || b.infinite_) return infinity();
    return ExtInt(a.value_ + b.value_);
  }

  friend constexpr bool operator==(ExtInt a, ExtInt b) {
    if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
    return a.value_ == b.value_;
  }

  friend constexpr std::strong_ordering operator<=>(ExtInt a, ExtInt b) {
    if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
    if (a.infinite_) return std::strong_ordering::greater;
    if (b.infinite_) return std::strong_ordering::less;
    return a.value_ <=> b.value_;
  }

  std::string to_string() const { return infinite_ ? "INF" : std::to_string(value_); }

  friend std::ostream& operator<<(std::ostream& os, ExtInt x) { return os << x.to_string(); }

 private:
  std::int64_t value_ = 0;
  bool infinite_ = false;
};

inline ExtInt max(ExtInt a, ExtInt b) { return a < b ? b : a; }
inline ExtInt min(ExtInt a, ExtInt b) { return a < b ? a : b; }

/// Parses a decimal integer or the token INF.
inline ExtInt parse_ext_int(const std::string& token) {
  if (token == "INF") return ExtInt::infinity();
  std::size_t used = 0;
  const long long v = std::stoll(token, &used);
  if (used != token.size()) throw std::invalid_argument("not an integer: " + token);
  return ExtInt(v);
}

}  // namespace linfdc
