#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "ergolab/dynamics.hpp"

namespace ergolab {

// System definition files are JSON: a group descriptor, points with exact
// "p/q" weights, and per-action generator images as 0-based image arrays.
//
// {
//   "group":   {"kind": "cyclic", "n": 2},
//   "points":  ["x0", "x1"],
//   "weights": ["1/2", "1/2"],
//   "actions": [{"generators": {"1": [1, 0]}}],
//   "options": {"budget": 200000}
// }
//
// Kinds: trivial | cyclic | symmetric | dihedral | integers. "integers"
// selects the LazyZ mode; its single generator key must be "1".

GroupPtr group_from_descriptor(const nlohmann::json& j);

GdSystem parse_system_json(const nlohmann::json& j);
GdSystem parse_system_file(const std::string& path);

nlohmann::json serialize_system(const GdSystem& s);

// Budget override from the file's options block, if any.
long long system_budget(const nlohmann::json& j, long long fallback);

// Observable CSV: header "point,real,imag", exact "p/q" entries, every
// support point present exactly once.
Obs parse_obs_csv(std::istream& in, const SpacePtr& base);
Obs parse_obs_file(const std::string& path, const SpacePtr& base);
void write_obs_csv(std::ostream& os, const Obs& f);

}  // namespace ergolab
