#pragma once

#include <string>

#include <json.hpp>

#include "fixtime/dynamics.hpp"
#include "fixtime/numerics.hpp"

namespace fixtime {

using ordered_json = nlohmann::ordered_json;

// System description schema:
//   {
//     "dim": 1, "T_c": 1.0, "t0": 0.0,
//     "base": {"kind": "Identity"},
//     "gain": {"type": "autonomous", "family": "PolyBeta",
//              "params": {"alpha": 1.0, ...}, "shape": "log1p"}
//   }
// base kinds: Identity, IdentityPlusRoot (field "a"), LinearMatrix (field "A",
// row-major array of arrays). Non-autonomous gains use "shape" for eta.
SystemSpec spec_from_json(const ordered_json& j, double gain_cap = 1e12);
ordered_json spec_to_json(const SystemSpec& spec);
SystemSpec load_spec(const std::string& path, double gain_cap = 1e12);

void write_atomic(const std::string& path, const std::string& content);

// Header t,x1,...,xn,gain,V then one %.17g row per sample.
std::string trajectory_csv(const SystemSpec& spec, const Trajectory& traj);

// 0 success, 1 validation error, 2 numerical failure.
int cli_run(int argc, const char* const* argv);

}  // namespace fixtime
