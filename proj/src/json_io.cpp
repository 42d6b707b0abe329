#include "hmono/json_io.hpp"

#include <fstream>

namespace hmono {

Json to_json(const Point& p) {
  Json arr = Json::array();
  for (int i = 0; i < p.n(); ++i) arr.push_back(p.x[i]);
  for (int i = 0; i < p.n(); ++i) arr.push_back(p.y[i]);
  arr.push_back(p.t);
  return arr;
}

Json to_json(const HVec& v) {
  Json arr = Json::array();
  for (int i = 0; i < v.n(); ++i) arr.push_back(v.a[i]);
  for (int i = 0; i < v.n(); ++i) arr.push_back(v.b[i]);
  return arr;
}

Point point_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 3 || j.size() % 2 != 1) {
    throw std::invalid_argument(
        "point: expected flat array [x..., y..., t] of odd length >= 3");
  }
  const int n = (static_cast<int>(j.size()) - 1) / 2;
  Vec x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = j[i].get<double>();
  for (int i = 0; i < n; ++i) y[i] = j[n + i].get<double>();
  return Point(x, y, j[2 * n].get<double>());
}

HVec hvec_from_json(const Json& j) {
  if (!j.is_array() || j.size() < 2 || j.size() % 2 != 0) {
    throw std::invalid_argument(
        "hvec: expected flat array [a..., b...] of even length >= 2");
  }
  const int n = static_cast<int>(j.size()) / 2;
  Vec a(n), b(n);
  for (int i = 0; i < n; ++i) a[i] = j[i].get<double>();
  for (int i = 0; i < n; ++i) b[i] = j[n + i].get<double>();
  return HVec(a, b);
}

Json to_json(const OperatorSpec& op) {
  Json j;
  switch (op.kind()) {
    case OperatorSpec::Kind::Linear: {
      j["kind"] = "linear";
      j["n"] = op.n();
      Json rows = Json::array();
      const Eigen::MatrixXd& a = op.matrix();
      for (int r = 0; r < a.rows(); ++r) {
        Json row = Json::array();
        for (int c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
        rows.push_back(row);
      }
      j["matrix"] = rows;
      break;
    }
    case OperatorSpec::Kind::GaugeSubdiff:
      j["kind"] = "gauge_subdiff";
      break;
    case OperatorSpec::Kind::ShiftScale:
      j["kind"] = "t_lambda";
      j["lambda"] = op.shift_lambda();
      j["inner"] = to_json(op.inner());
      break;
  }
  return j;
}

OperatorSpec operator_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind")) {
    throw std::invalid_argument("operator config: missing field 'kind'");
  }
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") {
    if (!j.contains("matrix")) {
      throw std::invalid_argument("operator config: missing field 'matrix'");
    }
    const Json& rows = j.at("matrix");
    if (!rows.is_array() || rows.empty()) {
      throw std::invalid_argument("operator config: 'matrix' must be an array");
    }
    const int size = static_cast<int>(rows.size());
    Eigen::MatrixXd a(size, size);
    for (int r = 0; r < size; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != size) {
        throw std::invalid_argument("operator config: 'matrix' must be square");
      }
      for (int c = 0; c < size; ++c) a(r, c) = rows[r][c].get<double>();
    }
    if (j.contains("n") && j.at("n").get<int>() * 2 != size) {
      throw std::invalid_argument(
          "operator config: field 'n' inconsistent with matrix size");
    }
    return OperatorSpec::linear(std::move(a));
  }
  if (kind == "gauge_subdiff") {
    return OperatorSpec::gauge_subdiff();
  }
  if (kind == "t_lambda") {
    if (!j.contains("lambda") || !j.contains("inner")) {
      throw std::invalid_argument(
          "operator config: t_lambda needs fields 'lambda' and 'inner'");
    }
    return OperatorSpec::shift_scale(operator_from_json(j.at("inner")),
                                     j.at("lambda").get<double>());
  }
  throw std::invalid_argument("operator config: unknown kind '" + kind + "'");
}

OperatorSpec load_operator(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("cannot open operator config: " + path);
  }
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("operator config parse error in " + path +
                                ": " + e.what());
  }
  return operator_from_json(j);
}

namespace {

Json witness_to_json(const PairWitness& w) {
  Json j;
  j["type"] = "pair";
  j["a"] = to_json(w.a);
  j["b"] = to_json(w.b);
  j["value_a"] = to_json(w.va);
  j["value_b"] = to_json(w.vb);
  j["slack"] = w.slack;
  return j;
}

Json witness_to_json(const ChainWitness& w) {
  Json j;
  j["type"] = "chain";
  Json pts = Json::array();
  for (const Point& p : w.points) pts.push_back(to_json(p));
  j["points"] = pts;
  Json vals = Json::array();
  for (const HVec& v : w.values) vals.push_back(to_json(v));
  j["values"] = vals;
  j["slack"] = w.slack;
  return j;
}

}  // namespace

Json to_json(const MonotoneVerdict& v) {
  Json j;
  j["ok"] = v.ok;
  j["worst_slack"] = v.worst_slack;
  if (v.witness) {
    j["witness"] = std::visit([](const auto& w) { return witness_to_json(w); },
                              *v.witness);
  } else {
    j["witness"] = nullptr;
  }
  return j;
}

Json to_json(const MintySolution& s) {
  Json j;
  j["zeta"] = to_json(s.zeta);
  j["residual"] = s.residual;
  j["iterations"] = s.iterations;
  return j;
}

Json to_json(const FiberSample& f) {
  Json j;
  j["v"] = to_json(f.v);
  j["lambda"] = f.lam;
  Json pts = Json::array();
  for (const Point& p : f.points) pts.push_back(to_json(p));
  j["points"] = pts;
  return j;
}

Json to_json(const LipschitzReport& r) {
  Json j;
  j["v"] = to_json(r.v);
  j["v2"] = to_json(r.v2);
  j["lambda"] = r.lam;
  j["tol"] = r.tol;
  j["bound"] = (r.v - r.v2).norm();
  Json entries = Json::array();
  for (const LipschitzEntry& e : r.entries) {
    Json je;
    je["height"] = e.height;
    je["eta"] = to_json(e.eta);
    je["eta2"] = to_json(e.eta2);
    je["xi1_distance"] = e.xi1_distance;
    je["ok"] = e.ok;
    entries.push_back(je);
  }
  j["entries"] = entries;
  j["all_ok"] = r.all_ok;
  return j;
}

}  // namespace hmono
