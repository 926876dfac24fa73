#pragma once

#include <wristsim/tasks.hpp>

#include <string>

// JSON and CSV renderings of the task reports. Output is deterministic:
// fixed key order, no timestamps, so repeated runs match byte for byte.

namespace wristsim {

std::string rotation_report_to_json(const RotationReport& r);
std::string stacking_report_to_json(const StackingReport& r);

/// Both conditions side by side plus a derived summary block.
std::string rotation_compare_to_json(const RotationReport& off,
                                     const RotationReport& on);
std::string stacking_compare_to_json(const StackingReport& off,
                                     const StackingReport& on);

/// One row per tracked waypoint, angles in degrees; row 0 is the start
/// posture. Header: step,q1_deg,...,qN_deg for an N joint log.
std::string joints_csv(const TrackResult& log);

}  // namespace wristsim
