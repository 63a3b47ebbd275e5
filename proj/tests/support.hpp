#ifndef SPACING_TESTS_SUPPORT_HPP
#define SPACING_TESTS_SUPPORT_HPP

#include "spacing/distributions.hpp"
#include "spacing/error.hpp"

#include <boost/math/constants/constants.hpp>

#include <optional>

namespace spacing::test {

inline constexpr long double kPi = boost::math::constants::pi<long double>();

/// Built once per process; every test reads it.
inline const SpacingModel& shared_model() {
  static const SpacingModel model{};
  return model;
}

template <class F>
std::optional<ErrorCode> error_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace spacing::test

#endif  // SPACING_TESTS_SUPPORT_HPP
