#pragma once

#include <json.hpp>

#include "hmono/monotone.hpp"
#include "hmono/operator_spec.hpp"
#include "hmono/resolvent.hpp"

// Wire formats.  Points serialize as flat arrays [x..., y..., t], first-layer
// vectors as [a..., b...]; n is declared once per document.  Operator configs:
//   {"kind": "linear", "n": 1, "matrix": [[3, 0], [-2, 4]]}
//   {"kind": "gauge_subdiff"}
//   {"kind": "t_lambda", "lambda": 1.0, "inner": {...}}
// Reports use ordered_json so identical inputs produce byte-identical output.

namespace hmono {

using Json = nlohmann::ordered_json;

Json to_json(const Point& p);
Json to_json(const HVec& v);
Point point_from_json(const Json& j);   // length 2n+1
HVec hvec_from_json(const Json& j);     // length 2n

Json to_json(const OperatorSpec& op);
OperatorSpec operator_from_json(const Json& j);
OperatorSpec load_operator(const std::string& path);

Json to_json(const MonotoneVerdict& v);
Json to_json(const MintySolution& s);
Json to_json(const FiberSample& f);
Json to_json(const LipschitzReport& r);

}  // namespace hmono
