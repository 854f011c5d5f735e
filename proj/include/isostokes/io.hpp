#pragma once
// JSON conversions. Complex numbers are [re, im]; exact values are strings "p/q+r/s*i".
#include <json.hpp>

#include "isostokes/system.hpp"

namespace iso {

using json = nlohmann::json;

json to_json(cd z);
json to_json(const CMat& m);
json to_json(const QMat& m);
json to_json(const std::vector<cd>& v);
// Angles as decimal strings with 16 significant digits.
std::string angle_str(double x);

// Accepts a number, [re, im], or an exact string.
Num num_from_json(const json& j);
cd cd_from_json(const json& j);
std::vector<cd> cvec_from_json(const json& j);
CoefMatrix matrix_from_json(const json& j);

// Either {"golden": name, ...} or an explicit description with
// n, u0, partition, tmap and A (a list of monomial lists per level).
SystemCoefficients system_from_json(const json& j);

// FNV-1a 64 of the canonical dump, as 16 hex digits.
std::string config_hash(const json& j);

}  // namespace iso
