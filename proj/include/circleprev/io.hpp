#pragma once

#include <string>

#include <json.hpp>

#include "circleprev/lifting.hpp"
#include "circleprev/measure_lab.hpp"
#include "circleprev/probe.hpp"
#include "circleprev/reflection_group.hpp"

namespace circleprev::io {

using nlohmann::json;

// Schemas (all numbers finite):
//   Lifting       {"c0": x, "r": int (default 2), "harmonics": [{"k", "sin", "cos"}]}
//   GroupElement  {"delta": x, "terms": [{"a": x, "w": Lifting}]}
//   Probe         {"F": Lifting, "kind": "I" | "II", "k": x (I), "G": Lifting (II)}
//   BoxUnion      {"dim": int, "boxes": [[{"lo", "hi"}, ...], ...]}
// Parse errors throw Error with kSchema.

Lifting lifting_from_json(const json& j);
json to_json(const Lifting& f);

GroupElement group_element_from_json(const json& j);
json to_json(const GroupElement& g);

Probe probe_from_json(const json& j, int grid_points = kDefaultGrid);
json to_json(const Probe& p);

BoxUnion box_union_from_json(const json& j);
json to_json(const BoxUnion& bu);

// Non-finite values become null.
json number(double x);

// Shortest round-trip decimal form.
std::string format_double(double x);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// Thrown for unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace circleprev::io
