// Helpers shared by the experiment runners.
#pragma once

#include <json.hpp>

#include "ksdk/experiments/experiments.hpp"

namespace ksdk::detail {

nlohmann::ordered_json spde_config_json(const SpdeConfig& c);
/// Nonzero coefficients of the upper half plane as [k1, k2, re, im].
nlohmann::ordered_json field_json(const FourierField& f);
nlohmann::ordered_json rule_json(const DeltaRule& r);

}  // namespace ksdk::detail
