#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "ergo/graph.hpp"
#include "ergo/residue.hpp"

namespace ergo {

using json = nlohmann::ordered_json;

struct LoadedTable {
  Op op;
  std::vector<std::string> labels;  // optional, one per element when present
};

// {"q": int, "table": [[...]], "labels": [...]?}
LoadedTable op_from_json(const json& j);
json op_to_json(const Op& op);

json family_to_json(const Family& f);
Family family_from_json(const json& j, int q);

struct ClassifyOptions {
  Caps caps;
  int oracle_bound = 64;
  bool timings = false;
};

// Full classification report; key order and content are deterministic so runs
// on the same table are byte-identical (timings are opt-in for that reason).
json classify(const Op& op, const ClassifyOptions& opts = {});

}  // namespace ergo
