#pragma once

#include <gtest/gtest.h>

#include <string>

#include "ellipse_lab/precision.hpp"

namespace ellipse_lab::testing {

/// Digits on which `value` agrees with the decimal literal `oracle`.
inline int digits_vs(const Real& value, const std::string& oracle) {
    Real ref = parse_real(oracle, static_cast<unsigned>(oracle.size()) + 10);
    return agreeing_digits(with_precision(value, static_cast<unsigned>(oracle.size()) + 10), ref);
}

}  // namespace ellipse_lab::testing
