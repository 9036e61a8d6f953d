#pragma once

#include <cstddef>
#include <cstdint>

#include <json.hpp>

#include "ccf/group.hpp"

namespace ccf::group {

/// Calibration parameters used when a spec document omits "c".
inline constexpr std::size_t kDefaultCalibrationSamples = 20000;
inline constexpr double kDefaultCalibrationRadius = 1.0;
inline constexpr std::uint64_t kDefaultCalibrationSeed = 0x5eedULL;

/// Accepts {"m1","m2","c","b":[[j,l,i,value],...]} with 1-based indices and
/// omitted coefficients zero, or the shorthand {"heisenberg": m, "c": ...}.
/// A missing "c" is filled in by calibrate_metric_constant.
GroupSpec spec_from_json(const nlohmann::json& doc);

/// Canonical form: always the explicit layout, nonzero coefficients only, in index order.
nlohmann::json spec_to_json(const GroupSpec& spec);

}  // namespace ccf::group
