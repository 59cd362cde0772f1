#pragma once

#include <string>
#include <string_view>

#include "mixmetric/metric.hpp"

namespace mixmetric {

inline constexpr int kModelFormatVersion = 1;

// JSON model document; numbers are written with round-trip precision, so
// load_model(save_model(m)) == m bit for bit.
std::string save_model(const FittedMetric& metric);
FittedMetric load_model(std::string_view text);

}  // namespace mixmetric
