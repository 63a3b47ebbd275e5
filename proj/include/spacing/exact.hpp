#ifndef SPACING_EXACT_HPP
#define SPACING_EXACT_HPP

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <climits>
#include <map>
#include <optional>
#include <string>

namespace spacing {

using Rational = boost::multiprecision::cpp_rational;

/// Element of Q[pi, 1/pi]: a finite sum of rational multiples of integer
/// powers of pi. Every coefficient that appears in the small-argument
/// expansions lives in this ring.
class PiRational {
 public:
  PiRational() = default;
  PiRational(const Rational& r);  // NOLINT(google-explicit-constructor)
  PiRational(long num, long den = 1, int pi_power = 0);  // NOLINT(google-explicit-constructor)

  /// r * pi^pi_power
  static PiRational monomial(const Rational& r, int pi_power);

  bool is_zero() const { return terms_.empty(); }
  bool is_monomial() const { return terms_.size() == 1; }
  const std::map<int, Rational>& terms() const { return terms_; }

  PiRational operator-() const;
  PiRational& operator+=(const PiRational& rhs);
  PiRational& operator-=(const PiRational& rhs);
  PiRational& operator*=(const PiRational& rhs);
  PiRational& operator*=(const Rational& rhs);
  friend PiRational operator+(PiRational a, const PiRational& b) { return a += b; }
  friend PiRational operator-(PiRational a, const PiRational& b) { return a -= b; }
  friend PiRational operator*(PiRational a, const PiRational& b) { return a *= b; }
  friend bool operator==(const PiRational& a, const PiRational& b) { return a.terms_ == b.terms_; }

  /// Division by a monomial r*pi^k; nullopt when the divisor is not a
  /// nonzero monomial (the quotient would leave the ring).
  std::optional<PiRational> divide(const PiRational& divisor) const;

  /// Exact square root when this is a monomial with even pi power and a
  /// perfect-square rational coefficient.
  std::optional<PiRational> sqrt() const;

  long double to_long_double() const;
  /// 50-digit value, for seeding extended-precision arithmetic.
  boost::multiprecision::cpp_bin_float_50 to_bin_float() const;
  std::string str() const;

 private:
  std::map<int, Rational> terms_;  // pi power -> nonzero coefficient
};

/// Truncated Laurent series in tau = s^{1/2}. Exponents are integers (so
/// half-integer powers of s), coefficients come from a ring C. Terms with
/// exponent above `cap` are dropped on every operation.
template <class C>
class TauSeries {
 public:
  TauSeries() = default;
  explicit TauSeries(int cap) : cap_(cap) {}

  static TauSeries constant(const C& c, int cap) {
    TauSeries out(cap);
    out.set(0, c);
    return out;
  }
  static TauSeries monomial(const C& c, int exponent, int cap) {
    TauSeries out(cap);
    out.set(exponent, c);
    return out;
  }

  int cap() const { return cap_; }
  const std::map<int, C>& terms() const { return terms_; }

  C coefficient(int exponent) const {
    auto it = terms_.find(exponent);
    return it == terms_.end() ? C{} : it->second;
  }

  void set(int exponent, const C& c) {
    if (exponent > cap_) return;
    if (is_zero_value(c)) {
      terms_.erase(exponent);
    } else {
      terms_[exponent] = c;
    }
  }

  /// Lowest exponent present, or INT_MAX for the zero series.
  int valuation() const { return terms_.empty() ? INT_MAX : terms_.begin()->first; }

  TauSeries& operator+=(const TauSeries& rhs) {
    for (const auto& [e, c] : rhs.terms_) set(e, coefficient(e) + c);
    return *this;
  }
  TauSeries& operator-=(const TauSeries& rhs) {
    for (const auto& [e, c] : rhs.terms_) set(e, coefficient(e) - c);
    return *this;
  }
  TauSeries operator-() const {
    TauSeries out(cap_);
    for (const auto& [e, c] : terms_) out.terms_[e] = -c;
    return out;
  }
  friend TauSeries operator+(TauSeries a, const TauSeries& b) { return a += b; }
  friend TauSeries operator-(TauSeries a, const TauSeries& b) { return a -= b; }

  friend TauSeries operator*(const TauSeries& a, const TauSeries& b) {
    TauSeries out(std::min(a.cap_, b.cap_));
    std::map<int, C> acc;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        const int e = ea + eb;
        if (e > out.cap_) break;
        acc[e] += ca * cb;
      }
    }
    for (auto& [e, c] : acc) out.set(e, c);
    return out;
  }

  /// Multiplication by tau^shift.
  TauSeries shifted(int shift) const {
    TauSeries out(cap_ == INT_MAX ? INT_MAX : cap_ + shift);
    for (const auto& [e, c] : terms_) out.terms_[e + shift] = c;
    return out;
  }

 private:
  static bool is_zero_value(const C& c) {
    if constexpr (requires { c.is_zero(); }) {
      return c.is_zero();
    } else {
      return c == C{};
    }
  }

  int cap_ = INT_MAX;
  std::map<int, C> terms_;
};

using ExactSeries = TauSeries<PiRational>;

}  // namespace spacing

#endif  // SPACING_EXACT_HPP
