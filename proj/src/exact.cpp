#include "spacing/exact.hpp"

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/integer.hpp>

#include <cmath>
#include <sstream>

namespace spacing {

namespace {

using boost::multiprecision::cpp_int;

std::optional<cpp_int> exact_isqrt(const cpp_int& v) {
  if (v < 0) return std::nullopt;
  cpp_int root = boost::multiprecision::sqrt(v);
  if (root * root != v) return std::nullopt;
  return root;
}

}  // namespace

PiRational::PiRational(const Rational& r) {
  if (r != 0) terms_.emplace(0, r);
}

PiRational::PiRational(long num, long den, int pi_power) {
  if (num != 0) terms_.emplace(pi_power, Rational(num, den));
}

PiRational PiRational::monomial(const Rational& r, int pi_power) {
  PiRational out;
  if (r != 0) out.terms_.emplace(pi_power, r);
  return out;
}

PiRational PiRational::operator-() const {
  PiRational out;
  for (const auto& [k, c] : terms_) out.terms_.emplace(k, -c);
  return out;
}

PiRational& PiRational::operator+=(const PiRational& rhs) {
  for (const auto& [k, c] : rhs.terms_) {
    auto [it, inserted] = terms_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }
  return *this;
}

PiRational& PiRational::operator-=(const PiRational& rhs) { return *this += -rhs; }

PiRational& PiRational::operator*=(const PiRational& rhs) {
  std::map<int, Rational> out;
  for (const auto& [ka, ca] : terms_) {
    for (const auto& [kb, cb] : rhs.terms_) out[ka + kb] += ca * cb;
  }
  std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
  terms_ = std::move(out);
  return *this;
}

PiRational& PiRational::operator*=(const Rational& rhs) {
  if (rhs == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, c] : terms_) c *= rhs;
  return *this;
}

std::optional<PiRational> PiRational::divide(const PiRational& divisor) const {
  if (!divisor.is_monomial()) return std::nullopt;
  const auto& [kd, cd] = *divisor.terms_.begin();
  PiRational out;
  for (const auto& [k, c] : terms_) out.terms_.emplace(k - kd, c / cd);
  return out;
}

std::optional<PiRational> PiRational::sqrt() const {
  if (is_zero()) return PiRational{};
  if (!is_monomial()) return std::nullopt;
  const auto& [k, c] = *terms_.begin();
  if (k % 2 != 0 || c < 0) return std::nullopt;
  auto num = exact_isqrt(boost::multiprecision::numerator(c));
  auto den = exact_isqrt(boost::multiprecision::denominator(c));
  if (!num || !den) return std::nullopt;
  return monomial(Rational(*num, *den), k / 2);
}

boost::multiprecision::cpp_bin_float_50 PiRational::to_bin_float() const {
  using boost::multiprecision::cpp_bin_float_50;
  const cpp_bin_float_50 pi = boost::math::constants::pi<cpp_bin_float_50>();
  cpp_bin_float_50 sum = 0;
  for (const auto& [k, c] : terms_) {
    sum += cpp_bin_float_50(numerator(c)) / cpp_bin_float_50(denominator(c)) * pow(pi, k);
  }
  return sum;
}

long double PiRational::to_long_double() const {
  const long double pi = boost::math::constants::pi<long double>();
  long double sum = 0.0L;
  for (const auto& [k, c] : terms_) {
    sum += static_cast<long double>(c) * std::pow(pi, static_cast<long double>(k));
  }
  return sum;
}

std::string PiRational::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << c;
    if (k != 0) os << "*pi^" << k;
  }
  return os.str();
}

}  // namespace spacing
