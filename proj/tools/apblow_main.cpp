// Command-line front end: build ball systems, run verification suites,
// scan A_alpha ratios along the ball family, and emit CSV/JSON reports.
//
// Exit codes: 0 success, 1 verification failure or runtime error,
// 2 invalid configuration.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

#include "apblow/diagnostics.hpp"
#include "apblow/geometry.hpp"
#include "apblow/io.hpp"
#include "apblow/muckenhoupt.hpp"

using namespace apblow;
using ordered_json = nlohmann::ordered_json;

namespace {

struct QuadFlags {
  std::string scheme = "low-discrepancy";
  uint64_t samples = 100000;
  uint64_t seed = 0;

  QuadratureSpec spec() const { return QuadratureSpec{scheme_from_name(scheme), samples, seed, 0}; }
};

void add_quad_flags(CLI::App* cmd, QuadFlags& q) {
  cmd->add_option("--scheme", q.scheme, "sampling scheme: low-discrepancy | pseudo-random");
  cmd->add_option("--samples", q.samples, "sample count per estimate");
  cmd->add_option("--seed", q.seed, "sampling seed (all randomness flows from it)");
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stoi(tok));
  }
  return out;
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (!tok.empty()) out.push_back(std::stod(tok));
  }
  return out;
}

int resolve_truncation(int flag, const BallSystem& sys) {
  if (flag <= 0) return sys.size();
  if (flag > sys.size()) raise(Errc::config_error, "--truncation exceeds the system size");
  return flag;
}

double resolve_epsilon(const std::string& flag, const Domain& domain, const QuadratureSpec& quad) {
  if (flag == "auto") return calibrate_epsilon(domain, quad.with_samples(400000)).epsilon;
  double e = std::stod(flag);
  if (!(e > 0.0 && e < 1.0)) raise(Errc::config_error, "epsilon must lie in (0,1)");
  return e;
}

double resolve_lift_scale(const std::string& flag, const Domain& domain) {
  if (flag == "auto") return calibrate_lift_scale(domain);
  double c = std::stod(flag);
  if (!(c > 0.0)) raise(Errc::config_error, "lift scale must be positive");
  return c;
}

// ---------------------------------------------------------------------------
// build

int cmd_build(const std::string& out_path, int n, double rho, int count) {
  BuildLog log;
  BallSystem sys = BallSystem::build(Domain{n}, rho, count, &log);
  sys.save(out_path);

  std::string logtext;
  logtext += "# l dense_index branch R\n";
  for (const auto& e : log) {
    logtext += std::to_string(e.l) + " " + std::to_string(e.dense_index) + " " +
               (e.clearance_bound ? "clearance" : "contraction") + " " + format_double(e.R) + "\n";
  }
  atomic_write_file(out_path + ".log", logtext);
  std::cout << "built " << sys.size() << " balls (n=" << n << ", rho=" << rho << ") -> " << out_path
            << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// verify

struct CheckRow {
  std::string suite;
  std::string check;
  std::string index;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool vacuous = false;
};

int cmd_verify(const std::string& system_path, const std::string& out_dir, QuadFlags quad_flags,
               int truncation, const std::string& epsilon_flag, const std::string& lift_flag,
               std::vector<std::string> only) {
  BallSystem sys = BallSystem::load(system_path);
  const int L = sys.size();
  truncation = resolve_truncation(truncation, sys);
  QuadratureSpec quad = quad_flags.spec();
  const double eps = resolve_epsilon(epsilon_flag, sys.domain(), quad);
  const double cw = resolve_lift_scale(lift_flag, sys.domain());
  FieldConfig cfg(&sys, truncation, cw);
  RegionParams params{eps};

  auto enabled = [&](const std::string& name) {
    return only.empty() || std::find(only.begin(), only.end(), name) != only.end();
  };

  std::vector<CheckRow> rows;
  auto push = [&](CheckRow row) {
    std::cout << (row.vacuous ? "[vacuous] " : (row.passed ? "[pass] " : "[FAIL] ")) << row.suite
              << "/" << row.check << (row.index.empty() ? "" : " @" + row.index) << " value="
              << row.value << " threshold=" << row.threshold << "\n";
    rows.push_back(std::move(row));
  };

  if (enabled("geometry")) {
    auto violations = check_window_disjointness(sys);
    push({"geometry", "window_disjointness", "", static_cast<double>(violations.size()), 0.0,
          violations.empty(), false});
    auto decay = check_radius_decay(sys);
    push({"geometry", "radius_decay", "", decay.worst_ratio, sys.rho(), decay.ok, false});
    auto cont = check_containment(sys);
    push({"geometry", "containment", "", cont.worst_reach, 1.0, cont.ok, false});
    for (int l : {1, std::max(1, L / 2)}) {
      double tail = sys.tail_inner_volume_ratio(l);
      push({"geometry", "tail_volume", std::to_string(l), tail, 1.0 / 3.0, tail <= 1.0 / 3.0, false});
      if (L / 2 <= 1) break;
    }
  }

  if (enabled("bounds")) {
    for (int k : {1, 5, 25, 125}) {
      if (k > truncation) break;
      auto rep = bounds_check(cfg, k, quad.with_samples(std::max<uint64_t>(quad.samples / 4, 20000)));
      double worst = std::max({rep.worst_value_ratio, rep.worst_grad_ratio, rep.worst_hess_ratio});
      push({"bounds", "pointwise_envelopes", std::to_string(k), worst, 1.0 + kOneSidedTol,
            rep.pass(), false});
    }
  }

  if (enabled("decomposition")) {
    for (int l : {8, 27, 125}) {
      if (l > truncation) break;
      auto rep = decomposition_check(cfg, params, l, quad.with_samples(20000));
      push({"decomposition", "window_identity", std::to_string(l), rep.max_rel_deviation, 1e-12,
            rep.max_rel_deviation <= 1e-12, false});
    }
  }

  if (enabled("sandwich")) {
    for (int l : {10, 100}) {
      if (l > truncation / 2) break;
      auto rep = sandwich_check(cfg, params, l, quad.with_samples(50000));
      push({"sandwich", "shear_lower", std::to_string(l),
            static_cast<double>(rep.shear_passes), static_cast<double>(rep.shear_samples),
            rep.shear_passes == rep.shear_samples, false});
      push({"sandwich", "combined_lower", std::to_string(l), rep.lower_threshold, 0.0,
            rep.lower_vacuous || rep.lower_passes == rep.lower_samples, rep.lower_vacuous});
      push({"sandwich", "background_upper", std::to_string(l),
            static_cast<double>(rep.background_passes), static_cast<double>(rep.background_samples),
            rep.background_passes == rep.background_samples, false});
      std::cout << "  crossover index for the combined lower bound: l* = " << rep.crossover << "\n";
    }
  }

  if (enabled("fd")) {
    std::vector<AnchoredPoint> pts;
    const int n = sys.domain().n;
    BallSampler gen(n, 0.35, quad.with_stream(0xFD));
    uint64_t i = 0;
    std::vector<int> anchors = {1, 2, 3, 5, 8, 10, 0};
    while (pts.size() < 64 && i < 4096) {
      int a = anchors[static_cast<size_t>(i % anchors.size())];
      if (a > truncation) a = 0;
      Vec off = gen.offset(i);
      for (int d = 0; d < n; ++d) off[d] += (a == 0 ? 0.45 : 0.08);
      ++i;
      AnchoredPoint cand{a, off};
      try {
        finite_difference_check(cfg, {cand}, 1e-3);  // smoothness probe
        pts.push_back(cand);
      } catch (const Error&) {
        continue;
      }
    }
    auto rep = finite_difference_check(cfg, pts, 1e-3);
    push({"fd", "gradient_order", "", rep.worst_grad_dev, 0.5, rep.worst_grad_dev <= 0.5, false});
    push({"fd", "hessian_order", "", rep.worst_hess_dev, 0.5, rep.worst_hess_dev <= 0.5, false});
  }

  if (enabled("divergence")) {
    auto rep = divergence_check(cfg, quad, std::min(500, truncation));
    push({"divergence", "solenoidal", "", rep.worst_rel, 1e-12, rep.worst_rel <= 1e-12, false});
  }

  bool all_pass = true;
  for (const auto& row : rows)
    if (!row.vacuous && !row.passed) all_pass = false;

  std::filesystem::create_directories(out_dir);
  std::string csv = "suite,check,index,value,threshold,passed,vacuous\n";
  for (const auto& row : rows) {
    csv += csv_line({row.suite, row.check, row.index, format_double(row.value),
                     format_double(row.threshold), row.passed ? "1" : "0", row.vacuous ? "1" : "0"});
  }
  atomic_write_file(out_dir + "/verify.csv", csv);

  ordered_json doc;
  doc["system"] = system_path;
  doc["truncation"] = truncation;
  doc["epsilon"] = eps;
  doc["lift_scale"] = cw;
  doc["scheme"] = scheme_name(quad.scheme);
  doc["samples"] = quad.samples;
  doc["seed"] = quad.seed;
  ordered_json checks = ordered_json::array();
  for (const auto& row : rows) {
    checks.push_back({{"suite", row.suite},
                      {"check", row.check},
                      {"index", row.index},
                      {"value", row.value},
                      {"threshold", row.threshold},
                      {"passed", row.passed},
                      {"vacuous", row.vacuous}});
  }
  doc["checks"] = std::move(checks);
  doc["all_pass"] = all_pass;
  atomic_write_file(out_dir + "/verify.json", doc.dump(1));

  std::cout << (all_pass ? "verify: all non-vacuous checks passed\n"
                         : "verify: FAILURES detected\n");
  return all_pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// scan

int cmd_scan(const std::string& system_path, const std::string& out_dir, QuadFlags quad_flags,
             double p, double alpha, const std::string& l_list, const std::string& l_range,
             const std::string& subdomain_flag, const std::string& epsilon_flag, int truncation,
             const std::string& lift_flag, bool allow_trivial) {
  BallSystem sys = BallSystem::load(system_path);
  truncation = resolve_truncation(truncation, sys);
  QuadratureSpec quad = quad_flags.spec();
  FieldConfig cfg(&sys, truncation, resolve_lift_scale(lift_flag, sys.domain()));
  RegionParams params{resolve_epsilon(epsilon_flag, sys.domain(), quad)};

  WeightParams wp{p, alpha};
  std::vector<int> ls = parse_int_list(l_list);
  if (!l_range.empty()) {
    auto parts = parse_double_list(l_range);  // min,max,count (geometric)
    if (parts.size() != 3) raise(Errc::config_error, "--lrange expects min,max,count");
    double lo = parts[0], hi = parts[1];
    int cnt = static_cast<int>(parts[2]);
    for (int i = 0; i < cnt; ++i) {
      double t = cnt == 1 ? 0.0 : static_cast<double>(i) / (cnt - 1);
      int l = static_cast<int>(std::lround(lo * std::pow(hi / lo, t)));
      if (ls.empty() || ls.back() != l) ls.push_back(l);
    }
  }
  if (ls.empty()) raise(Errc::config_error, "no scan indices given (--l or --lrange)");

  std::optional<Subdomain> sub;
  if (!subdomain_flag.empty()) {
    auto parts = parse_double_list(subdomain_flag);
    if (static_cast<int>(parts.size()) != sys.domain().n + 1)
      raise(Errc::config_error, "--subdomain expects cx,...,radius");
    Subdomain s;
    s.center = Vec(sys.domain().n);
    for (int i = 0; i < sys.domain().n; ++i) s.center[i] = parts[static_cast<size_t>(i)];
    s.radius = parts.back();
    sub = s;
  }

  APScanReport report = ap_scan(cfg, wp, ls, quad, params, sub, allow_trivial);

  std::filesystem::create_directories(out_dir);
  std::string csv = "l,ratio,se_ratio,mean_w,mean_w_dual,paper_bound,bound_status,samples\n";
  std::string dat;
  for (const auto& row : report.rows) {
    csv += csv_line({std::to_string(row.l), format_double(row.est.ratio),
                     format_double(row.est.se_ratio), format_double(row.est.mean_w),
                     format_double(row.est.mean_dual),
                     row.bound.status == BoundStatus::positive ? format_double(row.bound.value)
                                                               : "nan",
                     row.bound.status == BoundStatus::positive ? "positive" : "not_yet_positive",
                     std::to_string(row.est.samples)});
    dat += std::to_string(row.l) + " " + format_double(row.est.ratio) + "\n";
  }
  atomic_write_file(out_dir + "/scan.csv", csv);
  atomic_write_file(out_dir + "/scan.dat", dat);

  std::cout << "scanned " << report.rows.size() << " balls";
  if (sub) std::cout << " inside the subdomain";
  std::cout << "; log-log slope = " << report.loglog_slope << "\n";
  if (!report.rows.empty() && report.rows.front().bound.status == BoundStatus::not_yet_positive) {
    std::cout << "lower bound not yet positive at these depths (crossover l* = "
              << report.rows.front().bound.crossover << ")\n";
  }
  return 0;
}

// ---------------------------------------------------------------------------
// norms

int cmd_norms(const std::string& system_path, const std::string& out_dir, QuadFlags quad_flags,
              const std::string& mode_flag, double exponent, int kmax, int truncation,
              const std::string& lift_flag) {
  BallSystem sys = BallSystem::load(system_path);
  truncation = resolve_truncation(truncation, sys);
  FieldConfig cfg(&sys, truncation, resolve_lift_scale(lift_flag, sys.domain()));
  SeriesMode mode;
  if (mode_flag == "grad")
    mode = SeriesMode::grad_ls;
  else if (mode_flag == "hess")
    mode = SeriesMode::hess_lq;
  else
    raise(Errc::config_error, "--mode must be grad or hess");
  if (kmax <= 0) kmax = std::min(50, truncation);

  SeriesReport rep =
      sobolev_partial_norms(cfg, mode, exponent, kmax, quad_flags.spec().with_samples(
                                                           std::max<uint64_t>(quad_flags.samples / 10, 4000)));

  std::filesystem::create_directories(out_dir);
  std::string csv = "k,term,bound,cum_term,cum_bound,majorant\n";
  ordered_json rows = ordered_json::array();
  for (const auto& row : rep.rows) {
    csv += csv_line({std::to_string(row.k), format_double(row.term), format_double(row.bound),
                     format_double(row.cum_term), format_double(row.cum_bound),
                     format_double(rep.majorant)});
    rows.push_back({{"k", row.k},
                    {"term", row.term},
                    {"bound", row.bound},
                    {"cum_term", row.cum_term},
                    {"cum_bound", row.cum_bound}});
  }
  atomic_write_file(out_dir + "/norms.csv", csv);
  ordered_json doc;
  doc["mode"] = mode_flag;
  doc["exponent"] = exponent;
  doc["majorant"] = rep.majorant;
  doc["rows"] = std::move(rows);
  atomic_write_file(out_dir + "/norms.json", doc.dump(1));
  std::cout << "series mode=" << mode_flag << " exponent=" << exponent
            << " cumulative=" << rep.rows.back().cum_term << " majorant=" << rep.majorant << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// hessint

int cmd_hessint(const std::string& system_path, const std::string& out_dir, QuadFlags quad_flags,
                double p, const std::string& truncations_flag, int truncation,
                const std::string& lift_flag) {
  BallSystem sys = BallSystem::load(system_path);
  truncation = resolve_truncation(truncation, sys);
  FieldConfig cfg(&sys, truncation, resolve_lift_scale(lift_flag, sys.domain()));
  std::vector<int> truncs = parse_int_list(truncations_flag);
  if (truncs.empty()) raise(Errc::config_error, "--truncations expects a list like 25,50,100");

  HessianIntegralReport rep = weighted_hessian_integral(cfg, p, truncs, quad_flags.spec());

  std::filesystem::create_directories(out_dir);
  std::string csv = "truncation,value,unweighted,holder_hess52,holder_du\n";
  ordered_json rows = ordered_json::array();
  for (const auto& row : rep.rows) {
    csv += csv_line({std::to_string(row.truncation), format_double(row.value),
                     format_double(row.unweighted), format_double(row.holder_hess52),
                     format_double(row.holder_du)});
    rows.push_back({{"truncation", row.truncation},
                    {"value", row.value},
                    {"unweighted", row.unweighted},
                    {"holder_hess52", row.holder_hess52},
                    {"holder_du", row.holder_du}});
  }
  atomic_write_file(out_dir + "/hessint.csv", csv);
  ordered_json doc;
  doc["p"] = p;
  doc["samples"] = rep.samples;
  doc["rows"] = std::move(rows);
  atomic_write_file(out_dir + "/hessint.json", doc.dump(1));
  for (const auto& row : rep.rows)
    std::cout << "L=" << row.truncation << " integral=" << row.value
              << " unweighted=" << row.unweighted << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

int cmd_eval(const std::string& system_path, int anchor, const std::string& offset_flag,
             int truncation, const std::string& lift_flag, double p) {
  BallSystem sys = BallSystem::load(system_path);
  truncation = resolve_truncation(truncation, sys);
  FieldConfig cfg(&sys, truncation, resolve_lift_scale(lift_flag, sys.domain()));
  auto parts = parse_double_list(offset_flag);
  if (static_cast<int>(parts.size()) != sys.domain().n)
    raise(Errc::config_error, "--offset must have the domain dimension");
  AnchoredPoint x{anchor, Vec(sys.domain().n)};
  for (int i = 0; i < sys.domain().n; ++i) x.offset[i] = parts[static_cast<size_t>(i)];

  Jet J = eval_field_jet(cfg, x);
  SymGrad D = sym_gradient(J);
  const int n = J.n;
  ordered_json doc;
  doc["anchor"] = anchor;
  doc["offset"] = parts;
  std::vector<double> val(J.value.begin(), J.value.begin() + n);
  doc["value"] = val;
  ordered_json g = ordered_json::array(), h = ordered_json::array();
  for (int i = 0; i < n; ++i) {
    std::vector<double> rowv(J.grad[i].begin(), J.grad[i].begin() + n);
    g.push_back(rowv);
    ordered_json hi = ordered_json::array();
    for (int j = 0; j < n; ++j) {
      std::vector<double> hrow(J.hess[i][j].begin(), J.hess[i][j].begin() + n);
      hi.push_back(hrow);
    }
    h.push_back(std::move(hi));
  }
  doc["grad"] = std::move(g);
  doc["hess"] = std::move(h);
  doc["hessian_defined"] = J.hessian_defined;
  doc["boundary_flag"] = J.boundary_flag;
  doc["divergence"] = divergence(J);
  doc["sym_grad_norm"] = D.magnitude;
  doc["weight"] = std::pow(1.0 + D.magnitude, p - 2.0);
  std::cout << doc.dump(1) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ball-family shear-weight test bench"};
  app.require_subcommand(1);

  // build
  auto* build = app.add_subcommand("build", "construct a ball system and write it as JSON");
  int b_n = 2, b_count = 1000;
  double b_rho = 0.49;
  uint64_t b_seed = 0;
  std::string b_out = "sys.json";
  build->add_option("--n", b_n, "domain dimension (2..4)");
  build->add_option("--rho", b_rho, "contraction factor in (0, 1/2)");
  build->add_option("--count", b_count, "number of balls");
  build->add_option("--seed", b_seed, "accepted for interface symmetry; construction is deterministic");
  build->add_option("--out", b_out, "output path for the system JSON");

  // verify
  auto* verify = app.add_subcommand("verify", "run the verification suites against a system");
  std::string v_system, v_out = ".", v_eps = "auto", v_lift = "auto";
  int v_trunc = 0;
  QuadFlags v_quad;
  std::vector<std::string> v_only;
  verify->add_option("--system", v_system, "system JSON path")->required();
  verify->add_option("--out", v_out, "output directory for verify.json / verify.csv");
  verify->add_option("--truncation", v_trunc, "field truncation (default: all balls)");
  verify->add_option("--epsilon", v_eps, "region margin or 'auto'");
  verify->add_option("--lift-scale", v_lift, "lift scale or 'auto'");
  verify->add_option("--only", v_only,
                     "restrict to suites: geometry bounds decomposition sandwich fd divergence");
  add_quad_flags(verify, v_quad);

  // scan
  auto* scan = app.add_subcommand("scan", "A_alpha ratio scan along the ball family");
  std::string s_system, s_out = ".", s_l = "", s_lrange = "", s_sub = "", s_eps = "auto",
              s_lift = "auto";
  double s_p = 3.0, s_alpha = 2.0;
  int s_trunc = 0;
  bool s_trivial = false;
  QuadFlags s_quad;
  scan->add_option("--system", s_system, "system JSON path")->required();
  scan->add_option("--out", s_out, "output directory for scan.csv / scan.dat");
  scan->add_option("--p", s_p, "weight exponent p (p != 2 unless --allow-trivial)");
  scan->add_option("--alpha", s_alpha, "Muckenhoupt exponent alpha > 1");
  scan->add_option("--l", s_l, "comma-separated ball indices");
  scan->add_option("--lrange", s_lrange, "geometric range min,max,count");
  scan->add_option("--subdomain", s_sub, "restrict to balls inside cx,...,radius");
  scan->add_option("--epsilon", s_eps, "region margin or 'auto' (for the reported bound)");
  scan->add_option("--lift-scale", s_lift, "lift scale or 'auto'");
  scan->add_option("--truncation", s_trunc, "field truncation");
  scan->add_flag("--allow-trivial", s_trivial, "permit p = 2 (unit weight)");
  add_quad_flags(scan, s_quad);

  // norms
  auto* norms = app.add_subcommand("norms", "partial-sum Sobolev norm series");
  std::string n_system, n_out = ".", n_mode = "grad", n_lift = "auto";
  double n_exp = 2.0;
  int n_kmax = 0, n_trunc = 0;
  QuadFlags n_quad;
  norms->add_option("--system", n_system, "system JSON path")->required();
  norms->add_option("--out", n_out, "output directory for norms.csv");
  norms->add_option("--mode", n_mode, "grad | hess");
  norms->add_option("--exponent", n_exp, "s for grad mode, q for hess mode");
  norms->add_option("--kmax", n_kmax, "series length (default min(50, truncation))");
  norms->add_option("--truncation", n_trunc, "field truncation");
  norms->add_option("--lift-scale", n_lift, "lift scale or 'auto'");
  add_quad_flags(norms, n_quad);

  // hessint
  auto* hessint = app.add_subcommand("hessint", "weighted Hessian integrability at truncations");
  std::string h_system, h_out = ".", h_truncs = "25,50,100", h_lift = "auto";
  double h_p = 1.5;
  int h_trunc = 0;
  QuadFlags h_quad;
  hessint->add_option("--system", h_system, "system JSON path")->required();
  hessint->add_option("--out", h_out, "output directory for hessint.csv");
  hessint->add_option("--p", h_p, "weight exponent p in (1, inf)");
  hessint->add_option("--truncations", h_truncs, "increasing truncation levels, e.g. 25,50,100");
  hessint->add_option("--truncation", h_trunc, "field truncation");
  hessint->add_option("--lift-scale", h_lift, "lift scale or 'auto'");
  add_quad_flags(hessint, h_quad);

  // eval
  auto* eval = app.add_subcommand("eval", "evaluate the field jet at an anchored point");
  std::string e_system, e_offset = "0,0", e_lift = "auto";
  int e_anchor = 0, e_trunc = 0;
  double e_p = 3.0;
  eval->add_option("--system", e_system, "system JSON path")->required();
  eval->add_option("--anchor", e_anchor, "anchor ball index (0 = domain frame)");
  eval->add_option("--offset", e_offset, "offset in anchor units, comma-separated");
  eval->add_option("--truncation", e_trunc, "field truncation");
  eval->add_option("--lift-scale", e_lift, "lift scale or 'auto'");
  eval->add_option("--p", e_p, "exponent for the reported weight value");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (build->parsed()) return cmd_build(b_out, b_n, b_rho, b_count);
    if (verify->parsed())
      return cmd_verify(v_system, v_out, v_quad, v_trunc, v_eps, v_lift, v_only);
    if (scan->parsed())
      return cmd_scan(s_system, s_out, s_quad, s_p, s_alpha, s_l, s_lrange, s_sub, s_eps, s_trunc,
                      s_lift, s_trivial);
    if (norms->parsed())
      return cmd_norms(n_system, n_out, n_quad, n_mode, n_exp, n_kmax, n_trunc, n_lift);
    if (hessint->parsed())
      return cmd_hessint(h_system, h_out, h_quad, h_p, h_truncs, h_trunc, h_lift);
    if (eval->parsed()) return cmd_eval(e_system, e_anchor, e_offset, e_trunc, e_lift, e_p);
  } catch (const Error& err) {
    std::cerr << errc_name(err.code()) << ": " << err.what() << "\n";
    switch (err.code()) {
      case Errc::config_error:
      case Errc::domain_error:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
