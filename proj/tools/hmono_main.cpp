// hmono: command-line front end for the Heisenberg monotone-operator toolkit.
//
// Exit codes: 0 all checks pass, 1 a mathematical violation (or a solver
// failure on an operator that the theory says must be solvable), 2 usage or
// config error.  Reports embed the fully resolved configuration and the seed,
// and identical config+seed produce byte-identical output.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hmono/json_io.hpp"
#include "hmono/proof_geometry.hpp"
#include "hmono/rng.hpp"

namespace {

using hmono::Json;

std::vector<double> parse_reals(const std::string& s, const char* what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw std::invalid_argument(std::string("field '") + what +
                                  "': cannot parse real '" + item + "'");
    }
  }
  if (out.empty()) {
    throw std::invalid_argument(std::string("field '") + what + "': empty");
  }
  return out;
}

hmono::Point parse_point(const std::string& s, const char* what) {
  const std::vector<double> r = parse_reals(s, what);
  if (r.size() < 3 || r.size() % 2 != 1) {
    throw std::invalid_argument(std::string("field '") + what +
                                "': a point needs 2n+1 reals");
  }
  const int n = (static_cast<int>(r.size()) - 1) / 2;
  hmono::Vec x(n), y(n);
  for (int i = 0; i < n; ++i) x[i] = r[i];
  for (int i = 0; i < n; ++i) y[i] = r[n + i];
  return hmono::Point(x, y, r[2 * n]);
}

hmono::HVec parse_hvec(const std::string& s, const char* what) {
  const std::vector<double> r = parse_reals(s, what);
  if (r.size() < 2 || r.size() % 2 != 0) {
    throw std::invalid_argument(std::string("field '") + what +
                                "': a first-layer vector needs 2n reals");
  }
  hmono::Vec f(static_cast<int>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) f[static_cast<int>(i)] = r[i];
  return hmono::HVec::from_flat(f);
}

void write_text(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out);
  f << text;
}

void emit_json(const std::string& out, const Json& report) {
  write_text(out, report.dump(2) + "\n");
}

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Shared flag bundle; each subcommand registers the subset it uses.
struct CommonOpts {
  std::string op_path;
  std::string out = "-";
  std::string format = "json";
  int n = 0;  // 0 = take n from the operator
  std::uint64_t seed = 0;
  int trials = 10000;
  double tol = 1e-9;
  double lambda = 1.0;
};

hmono::OperatorSpec load_op_checked(const CommonOpts& c) {
  hmono::OperatorSpec op = hmono::load_operator(c.op_path);
  if (c.n != 0 && c.n != op.n()) {
    throw std::invalid_argument("field 'n': value " + std::to_string(c.n) +
                                " inconsistent with operator (n=" +
                                std::to_string(op.n()) + ")");
  }
  return op;
}

Json base_report(const std::string& sub) {
  Json j;
  j["tool"] = "hmono";
  j["subcommand"] = sub;
  return j;
}

void require_json_format(const CommonOpts& c) {
  if (c.format != "json") {
    throw std::invalid_argument("field 'format': '" + c.format +
                                "' not supported for this subcommand");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heisenberg-group monotone operator toolkit"};
  app.require_subcommand(1);

  CommonOpts c;
  std::string base_str = "0,0,0";
  std::string target_str;
  std::string v_str, v2_str;
  std::string heights_str = "0";
  std::string eta_prime_str = "1,0,0";
  std::string etas_file;
  std::string xi_str = "0,0,0";
  std::string x_str = "1,0";
  std::string t_range_str = "-1,1";
  std::string box_str = "-5,5";
  int max_len = 6;
  int k_max = 100;
  int points = 1000;
  int samples = 201;
  double grid_step = M_PI / 64.0;
  double fd_step = 1e-6;
  double big_k = 1.0;
  double ball_r = 0.9;
  double solver_tol = 1e-11;
  int max_iter = 20000;
  double probe_bound = -1.0;  // < 0: informational only

  auto add_common = [&](CLI::App* sub, bool with_op) {
    if (with_op) {
      sub->add_option("--op", c.op_path, "operator config (JSON)")->required();
    }
    sub->add_option("--out", c.out, "output path ('-' = stdout)");
    sub->add_option("--format", c.format, "json|csv");
    sub->add_option("--n", c.n, "expected dimension n (checked)");
    sub->add_option("--seed", c.seed, "RNG seed (recorded in the report)");
    sub->add_option("--tol", c.tol, "slack/check tolerance");
  };

  CLI::App* cm = app.add_subcommand("check-monotone",
                                    "sample horizontal pairs, verify slack");
  add_common(cm, true);
  cm->add_option("--trials", c.trials, "number of sampled pairs");
  cm->add_option("--box", box_str, "coordinate box lo,hi for base points");

  CLI::App* cc = app.add_subcommand("check-cyclic",
                                    "sample closed H-chains, verify cyclic slack");
  add_common(cc, true);
  cc->add_option("--trials", c.trials, "number of sampled chains");
  cc->add_option("--max-len", max_len, "max chain length (vertices)");

  CLI::App* sc = app.add_subcommand("search-cyclic",
                                    "hunt for a cyclic-monotonicity witness");
  add_common(sc, true);
  sc->add_option("--trials", c.trials, "number of chain trials");
  sc->add_option("--max-len", max_len, "max chain length (vertices)");

  CLI::App* rs = app.add_subcommand("resolve",
                                    "solve p in (xi1 + lambda T)(zeta) on H_base");
  add_common(rs, true);
  rs->add_option("--lambda", c.lambda, "lambda > 0")->required();
  rs->add_option("--base", base_str, "base point x..,y..,t");
  rs->add_option("--target", target_str, "target p (2n reals)")->required();
  rs->add_option("--solver-tol", solver_tol, "residual target");
  rs->add_option("--max-iter", max_iter, "iteration budget");

  CLI::App* fb = app.add_subcommand("fiber",
                                    "sample the resolvent fiber Q_lambda(v)");
  add_common(fb, true);
  fb->add_option("--lambda", c.lambda, "lambda > 0")->required();
  fb->add_option("--v", v_str, "fiber argument v (2n reals)")->required();
  fb->add_option("--heights", heights_str, "plane heights h1,h2,...");
  fb->add_option("--solver-tol", solver_tol, "residual target");

  CLI::App* lp = app.add_subcommand("lipschitz",
                                    "pairwise 1-Lipschitz resolvent bound");
  add_common(lp, true);
  lp->add_option("--lambda", c.lambda, "lambda > 0")->required();
  lp->add_option("--v", v_str, "first fiber argument")->required();
  lp->add_option("--v2", v2_str, "second fiber argument")->required();
  lp->add_option("--heights", heights_str, "plane heights h1,h2,...");
  lp->add_option("--solver-tol", solver_tol, "residual target");

  CLI::App* ls = app.add_subcommand("lemma-seq",
                                    "plane-intersection sequence of the lemma");
  add_common(ls, false);
  ls->add_option("--eta-prime", eta_prime_str, "normalized eta' (t = 0)");
  ls->add_option("--k-max", k_max, "canonical sequence eta_k=(0,..,0,1/k), k<=k-max");
  ls->add_option("--etas-file", etas_file, "JSON array of points (overrides canonical)");

  CLI::App* sb = app.add_subcommand("sector-check",
                                    "grid check of the sector inner-product bound");
  add_common(sb, false);
  sb->add_option("--grid-step", grid_step, "angular step (<= pi/32)");

  CLI::App* jc = app.add_subcommand("jacobian-check",
                                    "closed-form vs finite-difference |det JF|");
  add_common(jc, false);
  jc->add_option("--points", points, "random interior sample count");
  jc->add_option("--fd-step", fd_step, "central difference step");

  CLI::App* pt = app.add_subcommand("polytope",
                                    "support polytope P(xi) and boundedness");
  add_common(pt, false);
  pt->add_option("--xi", xi_str, "center point x..,y..,t");
  pt->add_option("--K", big_k, "vertical-segment diameter bound K");
  pt->add_option("--r", ball_r, "Koranyi ball radius containing xi");

  CLI::App* vp = app.add_subcommand("vertical-probe",
                                    "value diameter along a vertical segment");
  add_common(vp, true);
  vp->add_option("--x", x_str, "fixed first-layer position (2n reals)");
  vp->add_option("--t-range", t_range_str, "t interval lo,hi");
  vp->add_option("--samples", samples, "sample count (>= 2)");
  vp->add_option("--bound", probe_bound, "fail if the diameter exceeds this");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cm->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const std::vector<double> box = parse_reals(box_str, "box");
      if (box.size() != 2 || !(box[0] < box[1])) {
        throw std::invalid_argument("field 'box': expected lo,hi with lo < hi");
      }
      const hmono::MonotoneVerdict v = hmono::sample_h_pairs(
          op, hmono::Box{box[0], box[1]}, c.trials, c.seed, c.tol);
      Json rep = base_report("check-monotone");
      rep["config"] = {{"op", hmono::to_json(op)},
                       {"n", op.n()},
                       {"trials", c.trials},
                       {"seed", c.seed},
                       {"tol", c.tol},
                       {"box", {box[0], box[1]}},
                       {"offset_norm_range", {1e-3, 10.0}}};
      rep["result"] = hmono::to_json(v);
      rep["ok"] = v.ok;
      emit_json(c.out, rep);
      return v.ok ? 0 : 1;
    }

    if (cc->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const hmono::MonotoneVerdict v =
          hmono::sample_cyclic_chains(op, max_len, c.trials, c.seed, c.tol);
      Json rep = base_report("check-cyclic");
      rep["config"] = {{"op", hmono::to_json(op)}, {"n", op.n()},
                       {"trials", c.trials},       {"max_len", max_len},
                       {"seed", c.seed},           {"tol", c.tol}};
      rep["result"] = hmono::to_json(v);
      rep["ok"] = v.ok;
      emit_json(c.out, rep);
      return v.ok ? 0 : 1;
    }

    if (sc->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const auto witness =
          hmono::search_cyclic_violation(op, max_len, c.trials, c.seed, c.tol);
      Json rep = base_report("search-cyclic");
      rep["config"] = {{"op", hmono::to_json(op)}, {"n", op.n()},
                       {"trials", c.trials},       {"max_len", max_len},
                       {"seed", c.seed},           {"tol", c.tol}};
      if (witness) {
        hmono::MonotoneVerdict v;
        v.ok = false;
        v.worst_slack = witness->slack;
        v.witness = *witness;
        rep["result"] = hmono::to_json(v);
        rep["ok"] = false;
        emit_json(c.out, rep);
        return 1;
      }
      rep["result"] = {{"ok", true}, {"witness", nullptr}};
      rep["ok"] = true;
      emit_json(c.out, rep);
      return 0;
    }

    if (rs->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const hmono::Point base = parse_point(base_str, "base");
      const hmono::HVec p = parse_hvec(target_str, "target");
      hmono::MintyOptions opts;
      opts.tol = solver_tol;
      opts.max_iter = max_iter;
      Json rep = base_report("resolve");
      rep["config"] = {{"op", hmono::to_json(op)},
                       {"n", op.n()},
                       {"lambda", c.lambda},
                       {"base", hmono::to_json(base)},
                       {"target", hmono::to_json(p)},
                       {"solver_tol", solver_tol},
                       {"max_iter", max_iter},
                       {"seed", c.seed}};
      const hmono::MintySolution sol = hmono::minty_solve(op, base, c.lambda, p, opts);
      rep["result"] = hmono::to_json(sol);
      rep["ok"] = true;
      emit_json(c.out, rep);
      return 0;
    }

    if (fb->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const hmono::HVec v = parse_hvec(v_str, "v");
      const std::vector<double> heights = parse_reals(heights_str, "heights");
      hmono::MintyOptions opts;
      opts.tol = solver_tol;
      Json rep = base_report("fiber");
      rep["config"] = {{"op", hmono::to_json(op)},   {"n", op.n()},
                       {"lambda", c.lambda},         {"v", hmono::to_json(v)},
                       {"heights", heights},         {"solver_tol", solver_tol},
                       {"seed", c.seed}};
      const hmono::FiberSample fs = hmono::fiber_sample(op, v, c.lambda, heights, opts);
      rep["result"] = hmono::to_json(fs);
      rep["ok"] = true;
      emit_json(c.out, rep);
      return 0;
    }

    if (lp->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const hmono::HVec v = parse_hvec(v_str, "v");
      const hmono::HVec v2 = parse_hvec(v2_str, "v2");
      const std::vector<double> heights = parse_reals(heights_str, "heights");
      hmono::MintyOptions opts;
      opts.tol = solver_tol;
      Json rep = base_report("lipschitz");
      rep["config"] = {{"op", hmono::to_json(op)},  {"n", op.n()},
                       {"lambda", c.lambda},        {"v", hmono::to_json(v)},
                       {"v2", hmono::to_json(v2)},  {"heights", heights},
                       {"tol", c.tol},              {"solver_tol", solver_tol},
                       {"seed", c.seed}};
      const hmono::LipschitzReport lr =
          hmono::lipschitz_check(op, c.lambda, v, v2, heights, c.tol, opts);
      rep["result"] = hmono::to_json(lr);
      rep["ok"] = lr.all_ok;
      emit_json(c.out, rep);
      return lr.all_ok ? 0 : 1;
    }

    if (ls->parsed()) {
      require_json_format(c);
      const hmono::Point eta_prime = parse_point(eta_prime_str, "eta-prime");
      std::vector<hmono::Point> etas;
      if (!etas_file.empty()) {
        std::ifstream in(etas_file);
        if (!in) throw std::invalid_argument("cannot open etas file: " + etas_file);
        Json j;
        in >> j;
        for (const Json& pj : j) etas.push_back(hmono::point_from_json(pj));
      } else {
        const int n = eta_prime.n();
        for (int k = 1; k <= k_max; ++k) {
          etas.emplace_back(hmono::Vec::Zero(n), hmono::Vec::Zero(n), 1.0 / k);
        }
      }
      const double tol = c.tol < 1e-9 ? c.tol : 1e-10;
      const std::vector<hmono::Point> seq = hmono::lemma_sequence(eta_prime, etas, tol);
      Json rep = base_report("lemma-seq");
      rep["config"] = {{"eta_prime", hmono::to_json(eta_prime)},
                       {"count", static_cast<int>(etas.size())},
                       {"etas_file", etas_file},
                       {"tol", tol},
                       {"seed", c.seed}};
      Json rows = Json::array();
      double worst = 0.0;
      for (std::size_t k = 0; k < seq.size(); ++k) {
        const double r1 = hmono::hplane_residual(eta_prime, seq[k]);
        const double r2 = hmono::hplane_residual(etas[k], seq[k]);
        worst = std::max({worst, std::abs(r1), std::abs(r2)});
        rows.push_back({{"eta_k", hmono::to_json(etas[k])},
                        {"eta_prime_k", hmono::to_json(seq[k])},
                        {"residual_prime", r1},
                        {"residual_k", r2}});
      }
      rep["result"] = {{"sequence", rows}, {"max_residual", worst}};
      rep["ok"] = true;
      emit_json(c.out, rep);
      return 0;
    }

    if (sb->parsed()) {
      if (c.n < 1) throw std::invalid_argument("field 'n': required, n >= 1");
      const hmono::SectorScan scan = hmono::sector_bound_scan(c.n, grid_step);
      const double bound = hmono::sector_lower_bound(c.n);
      const bool ok = scan.min >= bound - 1e-12;
      if (c.format == "csv") {
        std::ostringstream csv;
        csv << "cube,min_inner_product\n";
        for (std::size_t i = 0; i < scan.cubes.size(); ++i) {
          for (std::size_t j = 0; j < scan.cubes[i].idx.size(); ++j) {
            csv << (j ? " " : "") << scan.cubes[i].idx[j];
          }
          csv << "," << fmt_double(scan.cube_min[i]) << "\n";
        }
        write_text(c.out, csv.str());
      } else {
        require_json_format(c);
        Json rep = base_report("sector-check");
        rep["config"] = {{"n", c.n}, {"grid_step", grid_step}, {"seed", c.seed}};
        rep["result"] = {{"min_inner_product", scan.min},
                         {"bound", bound},
                         {"cubes", static_cast<int>(scan.cubes.size())}};
        rep["ok"] = ok;
        emit_json(c.out, rep);
      }
      return ok ? 0 : 1;
    }

    if (jc->parsed()) {
      if (c.n < 1) throw std::invalid_argument("field 'n': required, n >= 1");
      std::ostringstream csv;
      csv << "t,rho,angles,closed_form,numeric,rel_error\n";
      Json rows = Json::array();
      double worst = 0.0;
      for (int i = 0; i < points; ++i) {
        hmono::Rng rng(hmono::Rng::derive(c.seed, static_cast<std::uint64_t>(i)));
        const double t = rng.uniform(1.0, 2.0);
        const double rho = rng.uniform(1.0, 2.0);
        const hmono::SphericalAngle ang = hmono::sample_interior_angle(c.n, rng);
        const hmono::JacobianCheck chk = hmono::jacobian_check(c.n, t, rho, ang, fd_step);
        worst = std::max(worst, chk.rel_error);
        if (c.format == "csv") {
          csv << fmt_double(t) << "," << fmt_double(rho) << ",";
          for (int j = 0; j < ang.angle_count(); ++j) {
            csv << (j ? " " : "") << fmt_double(ang.phi[j]);
          }
          csv << "," << fmt_double(chk.closed_form) << ","
              << fmt_double(chk.numeric) << "," << fmt_double(chk.rel_error)
              << "\n";
        } else {
          rows.push_back({{"t", t},
                          {"rho", rho},
                          {"closed_form", chk.closed_form},
                          {"numeric", chk.numeric},
                          {"rel_error", chk.rel_error}});
        }
      }
      const bool ok = worst <= 1e-6;
      if (c.format == "csv") {
        write_text(c.out, csv.str());
      } else {
        require_json_format(c);
        Json rep = base_report("jacobian-check");
        rep["config"] = {{"n", c.n},
                         {"points", points},
                         {"fd_step", fd_step},
                         {"seed", c.seed}};
        rep["result"] = {{"rows", rows}, {"worst_rel_error", worst}};
        rep["ok"] = ok;
        emit_json(c.out, rep);
      }
      return ok ? 0 : 1;
    }

    if (pt->parsed()) {
      require_json_format(c);
      const hmono::Point xi = parse_point(xi_str, "xi");
      const hmono::PolytopeBoundResult r = hmono::polytope_bound(xi, big_k, ball_r);
      Json rep = base_report("polytope");
      rep["config"] = {{"xi", hmono::to_json(xi)}, {"K", big_k}, {"r", ball_r},
                       {"seed", c.seed}};
      Json hs = Json::array();
      for (const auto& h : r.poly.halfspaces) {
        hs.push_back({{"normal", hmono::to_json(h.normal)}, {"offset", h.offset}});
      }
      Json verts = Json::array();
      for (const auto& v : r.vertices) verts.push_back(hmono::to_json(v));
      rep["result"] = {{"halfspaces", hs},
                       {"bounded", r.bounded},
                       {"bounded_exact", r.bounded_exact},
                       {"scan_min", r.scan_min},
                       {"radius_bound", r.radius_bound},
                       {"vertices", verts}};
      rep["ok"] = r.bounded;
      emit_json(c.out, rep);
      return r.bounded ? 0 : 1;
    }

    if (vp->parsed()) {
      const hmono::OperatorSpec op = load_op_checked(c);
      require_json_format(c);
      const hmono::HVec x = parse_hvec(x_str, "x");
      const std::vector<double> tr = parse_reals(t_range_str, "t-range");
      if (tr.size() != 2 || !(tr[0] <= tr[1])) {
        throw std::invalid_argument("field 't-range': expected lo,hi with lo <= hi");
      }
      const double diam = hmono::vertical_bound_probe(op, x, tr[0], tr[1], samples);
      const bool ok = probe_bound < 0.0 || diam <= probe_bound;
      Json rep = base_report("vertical-probe");
      rep["config"] = {{"op", hmono::to_json(op)}, {"n", op.n()},
                       {"x", hmono::to_json(x)},   {"t_range", {tr[0], tr[1]}},
                       {"samples", samples},       {"bound", probe_bound},
                       {"seed", c.seed}};
      rep["result"] = {{"diameter", diam}};
      rep["ok"] = ok;
      emit_json(c.out, rep);
      return ok ? 0 : 1;
    }
  } catch (const hmono::SolveError& e) {
    std::cerr << "solver failure (mathematical violation on a maximal "
                 "operator): " << e.what() << "\n";
    return 1;
  } catch (const hmono::ChainError& e) {
    std::cerr << "chain error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
