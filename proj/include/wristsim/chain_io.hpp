#pragma once

#include <wristsim/kinematics.hpp>

#include <stdexcept>
#include <string>

namespace wristsim {

/// Raised for malformed or unreadable configuration input of any kind.
struct config_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses a chain from JSON text of the form
///   {"joints": [{"a":…, "alpha":…, "d":…, "theta_offset":…,
///                "limit_min":…, "limit_max":…, "speed":…}, …]}
/// Lengths are mm, angles rad, speeds rad/s. Throws config_error on any
/// missing field, wrong type, or invariant violation.
Chaind parse_chain(const std::string& json_text);

/// parse_chain() on the contents of a file.
Chaind load_chain(const std::string& path);

/// Serializes a chain to the same JSON schema parse_chain() accepts.
std::string chain_to_json(const Chaind& chain);

// --- shipped default models ------------------------------------------------

/// 6-DoF arm from the manufacturer's published DH sheet (850 mm reach class),
/// link-length signs normalized positive, which mirrors the zero pose but
/// leaves the workspace identical. Limits +-2 turns, joint speed 180 deg/s.
Chaind default_arm_chain();

/// 2-DoF wrist: radial/ulnar deviation then flexion/extension.
/// Rows {a 34, alpha pi/2} and {a 48, alpha 0}; ROM +-30 deg and +-90 deg.
Chaind default_wrist_chain();

/// Length of the actuation box between the arm's tool flange and the wrist
/// base, along the flange normal.
constexpr double kDefaultMountLengthMm = 120.0;

/// Builds the arm+wrist composite as a single DH chain. The mount (a fixed
/// translation along the flange normal plus the frame change that points the
/// wrist's first link along it) folds exactly into the arm's final row and
/// the wrist's first row, so plain row concatenation stays valid:
///   arm last row:  theta_offset += pi/2, alpha := pi/2, d += mount length
///   wrist row 0:   theta_offset += pi/2
/// Requires the arm's last row to have a == 0 and alpha == 0 (true of the
/// shipped arm file). At wrist neutral the palm sits mount+82 mm along the
/// original flange normal, and the deviation axis equals the flange x axis.
Chaind mount_wrist_on_arm(const Chaind& arm, const Chaind& wrist,
                          double mount_length_mm = kDefaultMountLengthMm);

}  // namespace wristsim
