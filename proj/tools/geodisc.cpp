// geodisc command-line front end. Exit codes: 0 success, 1 domain or IO
// error, 2 usage error.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "geodisc/discrepancy.hpp"
#include "geodisc/error.hpp"
#include "geodisc/experiments.hpp"
#include "geodisc/io.hpp"
#include "geodisc/pointsets.hpp"
#include "geodisc/specfun.hpp"
#include "geodisc/spectral.hpp"
#include "json.hpp"

using namespace geodisc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---- output ----

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

std::string scalar_text(const json& v) {
  if (v.is_number_float()) return num(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

bool is_table(const json& v) {
  return v.is_array() && !v.empty() && std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_object(); });
}

void print_table(std::ostream& os, const json& rows) {
  std::vector<std::string> cols;
  for (auto it = rows.front().begin(); it != rows.front().end(); ++it) cols.push_back(it.key());
  for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "\t" : "") << cols[i];
  os << "\n";
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < cols.size(); ++i) {
      os << (i ? "\t" : "");
      if (r.contains(cols[i])) {
        const auto& v = r[cols[i]];
        if (v.is_array()) {
          for (std::size_t k = 0; k < v.size(); ++k) os << (k ? "," : "") << scalar_text(v[k]);
        } else {
          os << scalar_text(v);
        }
      }
    }
    os << "\n";
  }
}

void print_human(std::ostream& os, const json& j, const std::string& prefix = "") {
  std::vector<std::pair<std::string, const json*>> tables;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const auto& v = it.value();
    const std::string key = prefix + it.key();
    if (is_table(v)) {
      tables.emplace_back(key, &v);
    } else if (v.is_object()) {
      print_human(os, v, key + ".");
    } else if (v.is_array()) {
      os << key << "=";
      for (std::size_t k = 0; k < v.size(); ++k) os << (k ? " " : "") << scalar_text(v[k]);
      os << "\n";
    } else {
      os << key << "=" << scalar_text(v) << "\n";
    }
  }
  for (const auto& [key, rows] : tables) {
    os << "\n[" << key << "]\n";
    print_table(os, *rows);
  }
}

struct Output {
  bool as_json = false;
  void emit(const json& j, const std::string& headline = "") const {
    if (as_json) {
      std::cout << j.dump(2) << "\n";
      return;
    }
    if (!headline.empty()) std::cout << headline << "\n";
    print_human(std::cout, j);
  }
};

void warn(const std::string& msg) { std::cerr << "warning: " << msg << "\n"; }

// ---- argument helpers ----

// Radii are radians only; anything carrying a degree unit is refused.
double parse_radius(const std::string& text, const std::string& flag) {
  std::string t = text;
  t.erase(std::remove_if(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); }), t.end());
  std::string low;
  for (unsigned char c : t) low.push_back(static_cast<char>(std::tolower(c)));
  if (low.size() > 3 && low.substr(low.size() - 3) == "rad") low.resize(low.size() - 3);
  if (low.find("deg") != std::string::npos || t.find("\xC2\xB0") != std::string::npos ||
      (!low.empty() && low.back() == 'd'))
    throw UsageError(flag + ": radii are given in radians; degree input is not accepted");
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(low, &used);
  } catch (const std::exception&) {
    throw UsageError(flag + ": not a number: '" + text + "'");
  }
  if (used != low.size()) throw UsageError(flag + ": not a number: '" + text + "'");
  return v;
}

struct SpaceOpts {
  std::string space;
  std::string family;
  int n = 0;
  int d = 0, d0 = 0;

  void add(CLI::App* app) {
    app->add_option("--space", space, "space name, e.g. sphere2, RP3, CP2, HP2, OP2");
    app->add_option("--family", family, "sphere, real, complex, quaternion, octonion or abstract");
    app->add_option("--n", n, "dimension index of the family");
    app->add_option("--d", d, "real dimension (abstract family)");
    app->add_option("--d0", d0, "fiber dimension (abstract family)");
  }
  bool given() const { return !space.empty() || !family.empty(); }
  std::optional<Space> get() const {
    if (!space.empty()) {
      if (!family.empty()) throw UsageError("give either --space or --family, not both");
      return Space(parse_space(space));
    }
    if (family.empty()) return std::nullopt;
    const Family f = family_from_string(family);
    if (f == Family::Abstract) return Space(SpaceKind::abstract(d, d0));
    if (f == Family::ProjOctonion) return Space(SpaceKind::octonion());
    if (n < 1) throw UsageError("--family needs --n");
    return Space(SpaceKind{f, n});
  }
  Space require() const {
    auto s = get();
    if (!s) throw UsageError("a space is required (--space or --family/--n)");
    return *s;
  }
};

struct InputOpts {
  std::string path;
  std::string format = "auto";
  SpaceOpts space;

  void add(CLI::App* app, bool required = true) {
    auto* o = app->add_option("--in", path, "point set file (native JSON, t-design text or distance matrix)");
    if (required) o->required();
    app->add_option("--format", format, "auto, native, tdesign or matrix");
    space.add(app);
  }
  WeightedPointSet load() const { return load_pointset(path, format_from_string(format), space.get()); }
};

// ---- commands ----

struct Globals {
  Output out;
  int threads = 0;
  std::vector<std::string> argv;
};

json space_json(const Space& sp) {
  const auto& p = sp.params();
  json j{{"name", sp.name()}, {"d", p.d}, {"d0", p.d0}, {"a", p.a}, {"b", p.b}, {"c_ab", p.c_ab}};
  j["vector_model"] = sp.has_vector_model();
  if (sp.has_vector_model()) j["vector_length"] = sp.vector_length();
  return j;
}

json report_json(const DiscrepancyReport& rep) { return to_json(rep); }

std::string report_headline(const DiscrepancyReport& rep) {
  return num(rep.value) + " ± " + num(rep.tail_bound);
}

}  // namespace

int run(int argc, char** argv) {
  Globals g;
  for (int i = 0; i < argc; ++i) g.argv.emplace_back(argv[i]);

  CLI::App app{"Geodesic-ball L2 discrepancy on compact two-point homogeneous spaces", "geodisc"};
  app.require_subcommand(1);
  app.add_flag("--json", g.out.as_json, "machine-readable JSON output");
  app.add_option("--threads", g.threads, "worker threads (default: GEODISC_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);
  app.set_version_flag("--version", kVersion);
  app.fallthrough();

  // space info
  auto* space_cmd = app.add_subcommand("space", "space parameters")->require_subcommand(1);
  auto* space_info = space_cmd->add_subcommand("info", "print d, d0, a, b and the ball-volume constant");
  SpaceOpts si;
  si.add(space_info);
  std::string si_r;
  space_info->add_option("--r", si_r, "also print the ball volume at this radius");

  // jacobi
  auto* jac = app.add_subcommand("jacobi", "Jacobi polynomials")->require_subcommand(1);
  double ja = 0, jb = 0, jx = 0;
  int jm = 0;
  SpaceOpts jsp;
  auto* jac_eval = jac->add_subcommand("eval", "P_m^{a,b}(x)");
  jac_eval->add_option("--a", ja, "alpha");
  jac_eval->add_option("--b", jb, "beta");
  jac_eval->add_option("--m", jm, "degree")->required();
  jac_eval->add_option("--x", jx, "argument in [-1, 1]")->required();
  jsp.add(jac_eval);
  auto* jac_zeros = jac->add_subcommand("zeros", "zeros of P_{m-1}^{a+1,b+1}(cos t) with asymptotic estimates");
  jac_zeros->add_option("--a", ja, "alpha of the space");
  jac_zeros->add_option("--b", jb, "beta of the space");
  jac_zeros->add_option("--m", jm, "degree m (gives m-1 zeros)")->required();
  SpaceOpts jzs;
  jzs.add(jac_zeros);

  // bessel
  auto* bes = app.add_subcommand("bessel", "Bessel functions of the first kind")->require_subcommand(1);
  double bnu = 0, bx = 0;
  int bcount = 10;
  auto* bes_eval = bes->add_subcommand("eval", "J_nu(x)");
  bes_eval->add_option("--nu", bnu, "order >= -1/2")->required();
  bes_eval->add_option("--x", bx, "argument >= 0")->required();
  auto* bes_zeros = bes->add_subcommand("zeros", "first positive zeros of J_nu");
  bes_zeros->add_option("--nu", bnu, "order >= -1/2")->required();
  bes_zeros->add_option("--count", bcount, "number of zeros")->check(CLI::PositiveNumber);

  // coeffs
  auto* coeffs = app.add_subcommand("coeffs", "ball-coefficient table c_m(r), d_m and Parseval sums");
  SpaceOpts cs;
  cs.add(coeffs);
  std::string c_r;
  int c_M = 50;
  coeffs->add_option("--r", c_r, "radius in radians")->required();
  coeffs->add_option("--max-degree", c_M, "largest m")->check(CLI::PositiveNumber);

  // discrepancy
  auto* disc = app.add_subcommand("discrepancy", "L2 ball discrepancy of a point set")->require_subcommand(1);
  InputOpts d_in, mc_in;
  std::string d_r, d_r2, d_method = "auto";
  double d_tol = kDefaultTolerance;
  int d_cap = kDegreeCap, d_fixed = 0;
  bool d_per_m = false;
  auto* d_spec = disc->add_subcommand("spectral", "spectral series with a rigorous tail bound");
  d_in.add(d_spec);
  d_spec->add_option("--r", d_r, "radius in radians")->required();
  d_spec->add_option("--r2", d_r2, "second radius; the output is the sum over both");
  d_spec->add_option("--tol", d_tol, "tail-bound tolerance");
  d_spec->add_option("--max-degree", d_cap, "degree cap for the adaptive choice");
  d_spec->add_option("--fixed-degree", d_fixed, "use exactly this degree");
  d_spec->add_flag("--per-m", d_per_m, "report per-degree contributions");
  d_spec->add_option("--method", d_method, "auto, gram or kernel");
  std::string mc_r;
  std::uint64_t mc_samples = 1000000, mc_seed = 0;
  auto* d_mc = disc->add_subcommand("mc", "Monte Carlo estimate over random centers");
  mc_in.add(d_mc);
  d_mc->add_option("--r", mc_r, "radius in radians")->required();
  d_mc->add_option("--samples", mc_samples, "number of centers (>= 1000)");
  d_mc->add_option("--seed", mc_seed, "random seed");

  // gram
  auto* gram = app.add_subcommand("gram", "Gram spectrum S_m of a point set");
  InputOpts g_in;
  g_in.add(gram);
  int g_M = 20;
  gram->add_option("--max-degree", g_M, "largest m")->check(CLI::PositiveNumber);

  // cubature
  auto* cub = app.add_subcommand("cubature", "cubature strength")->require_subcommand(1);
  auto* cub_check = cub->add_subcommand("check", "largest X with S_1..S_X below the tolerance");
  InputOpts cu_in;
  cu_in.add(cub_check);
  double cu_tol = 1e-10;
  int cu_cap = 1000;
  cub_check->add_option("--tol", cu_tol, "zero tolerance for S_m");
  cub_check->add_option("--max-degree", cu_cap, "largest degree checked");

  // pointset
  auto* pts = app.add_subcommand("pointset", "generate or convert point sets")->require_subcommand(1);
  auto* p_gen = pts->add_subcommand("gen", "generate a point set");
  SpaceOpts pg_sp;
  pg_sp.add(p_gen);
  std::string pg_gen = "uniform", pg_out, pg_format = "auto", pg_path;
  std::size_t pg_count = 0;
  std::uint64_t pg_seed = 0;
  p_gen->add_option("--generator", pg_gen, "uniform, fibonacci, tdesign or matrix");
  p_gen->add_option("--count", pg_count, "number of points")->check(CLI::PositiveNumber);
  p_gen->add_option("--seed", pg_seed, "random seed");
  p_gen->add_option("--source", pg_path, "file for the tdesign and matrix generators");
  p_gen->add_option("--out", pg_out, "output file")->required();
  p_gen->add_option("--format", pg_format, "output format: auto, native, tdesign or matrix");
  auto* p_conv = pts->add_subcommand("convert", "convert between point formats");
  InputOpts pc_in;
  pc_in.add(p_conv);
  std::string pc_out, pc_format = "auto";
  p_conv->add_option("--out", pc_out, "output file")->required();
  p_conv->add_option("--to", pc_format, "output format: auto, native, tdesign or matrix");

  // experiment
  auto* exp = app.add_subcommand("experiment", "batch studies")->require_subcommand(1);
  auto* e_scal = exp->add_subcommand("scaling", "discrepancy versus N with a log-log fit");
  std::string es_config, es_out = "results", es_gen, es_r, es_policy;
  SpaceOpts es_sp;
  es_sp.add(e_scal);
  std::vector<std::size_t> es_N;
  int es_seeds = 0;
  std::uint64_t es_seed = 0;
  double es_kappa = 0, es_tol = 0;
  bool es_two = false, es_resume = false;
  int es_boot = 0;
  auto* es_seed_opt = e_scal->add_option("--seed", es_seed, "base seed; cell s uses seed + s");
  e_scal->add_option("--config", es_config, "study config JSON");
  e_scal->add_option("--generator", es_gen, "uniform or fibonacci");
  e_scal->add_option("--N", es_N, "N grid")->delimiter(',');
  e_scal->add_option("--r", es_r, "radius in radians");
  e_scal->add_flag("--two-radius", es_two, "use the radii r and 2r");
  e_scal->add_option("--seeds", es_seeds, "seeds per N");
  e_scal->add_option("--degree-policy", es_policy, "scaled or adaptive");
  e_scal->add_option("--kappa", es_kappa, "scaled policy: M = max(64, ceil(kappa N^(1/d)))");
  e_scal->add_option("--tol", es_tol, "adaptive policy tolerance");
  e_scal->add_option("--bootstrap", es_boot, "bootstrap replicates for the slope");
  e_scal->add_option("--out", es_out, "output directory");
  e_scal->add_flag("--resume", es_resume, "reuse cached cells from a previous run");

  auto* e_sweep = exp->add_subcommand("sweep", "sup over r of N^{1+1/d} times the discrepancy");
  std::vector<std::string> ew_in;
  std::string ew_dir, ew_out = "results", ew_rmin = "0.1", ew_rmax;
  int ew_count = 21;
  double ew_kappa = 16;
  e_sweep->add_option("--in", ew_in, "point set files");
  e_sweep->add_option("--designs", ew_dir, "directory of t-design files");
  e_sweep->add_option("--r-min", ew_rmin, "smallest radius");
  e_sweep->add_option("--r-max", ew_rmax, "largest radius (default pi - 0.3)");
  e_sweep->add_option("--count", ew_count, "grid size")->check(CLI::PositiveNumber);
  e_sweep->add_option("--kappa", ew_kappa, "M = max(64, ceil(kappa N^(1/d)))");
  e_sweep->add_option("--out", ew_out, "output directory");

  auto* e_bad = exp->add_subcommand("badradius", "scan radii for small weighted Jacobi values");
  SpaceOpts eb_sp;
  eb_sp.add(e_bad);
  std::string eb_rmin = "0.05", eb_rmax, eb_out = "results";
  int eb_count = 200, eb_M = 200, eb_m0 = 2;
  double eb_delta = 0.1, eb_thr = 1e-3;
  e_bad->add_option("--r-min", eb_rmin, "smallest radius");
  e_bad->add_option("--r-max", eb_rmax, "largest radius (default pi - 0.05)");
  e_bad->add_option("--count", eb_count, "grid size")->check(CLI::PositiveNumber);
  e_bad->add_option("--max-degree", eb_M, "largest m")->check(CLI::PositiveNumber);
  e_bad->add_option("--m0", eb_m0, "smallest m");
  e_bad->add_option("--delta", eb_delta, "exponent slack");
  e_bad->add_option("--threshold", eb_thr, "flag radii with score below this");
  e_bad->add_option("--out", eb_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  const Output& out = g.out;
  const int T = g.threads;

  if (space_info->parsed()) {
    const Space sp = si.require();
    json j = space_json(sp);
    if (!si_r.empty()) {
      const double r = parse_radius(si_r, "--r");
      j["r"] = r;
      j["volume"] = sp.ball_volume(r);
    }
    out.emit(j);
  } else if (jac_eval->parsed()) {
    if (auto sp = jsp.get()) {
      ja = sp->params().a;
      jb = sp->params().b;
    }
    const double v = jacobi_eval({ja, jb, jm}, jx);
    out.emit(json{{"a", ja}, {"b", jb}, {"m", jm}, {"x", jx}, {"value", v},
                  {"normalized", v / jacobi_at_one({ja, jb, jm})}});
  } else if (jac_zeros->parsed()) {
    if (auto sp = jzs.get()) {
      ja = sp->params().a;
      jb = sp->params().b;
    }
    json rows = json::array();
    for (int ell = 1; ell <= jm - 1; ++ell) {
      const auto z = jacobi_zero(ja, jb, jm, ell);
      rows.push_back(json{{"l", ell},
                          {"theta", z.location},
                          {"estimate", z.initial},
                          {"error", z.initial - z.location},
                          {"residual", z.residual},
                          {"iterations", z.iterations}});
    }
    out.emit(json{{"a", ja}, {"b", jb}, {"m", jm}, {"zeros", rows}});
  } else if (bes_eval->parsed()) {
    out.emit(json{{"nu", bnu}, {"x", bx}, {"value", bessel_j(bnu, bx)}});
  } else if (bes_zeros->parsed()) {
    json rows = json::array();
    for (int ell = 1; ell <= bcount; ++ell) {
      const auto z = bessel_zero(bnu, ell);
      rows.push_back(json{{"l", ell},
                          {"zero", z.location},
                          {"mcmahon", z.initial},
                          {"residual", z.residual},
                          {"iterations", z.iterations}});
    }
    out.emit(json{{"nu", bnu}, {"zeros", rows}});
  } else if (coeffs->parsed()) {
    const Space sp = cs.require();
    const double r = parse_radius(c_r, "--r");
    const BallCoefficientTable t(sp.params(), r, c_M);
    json rows = json::array();
    for (int m = 1; m <= c_M; ++m)
      rows.push_back(json{{"m", m},
                          {"dim", t.dim(m)},
                          {"c", t.coeff(m)},
                          {"weight", t.weight(m)},
                          {"partial", t.partial(m)},
                          {"remainder", t.remainder(m)}});
    out.emit(json{{"space", sp.name()}, {"r", r}, {"volume", t.volume()}, {"variance", t.variance()},
                  {"table", rows}});
  } else if (d_spec->parsed()) {
    const WeightedPointSet ps = d_in.load();
    std::vector<double> radii{parse_radius(d_r, "--r")};
    if (!d_r2.empty()) radii.push_back(parse_radius(d_r2, "--r2"));
    DiscrepancyOptions opt;
    opt.tol = d_tol;
    opt.degree_cap = d_cap;
    opt.fixed_degree = d_fixed;
    opt.per_m = d_per_m;
    opt.threads = T;
    if (d_method == "auto")
      opt.method = SpectralMethod::Auto;
    else if (d_method == "gram")
      opt.method = SpectralMethod::Gram;
    else if (d_method == "kernel")
      opt.method = SpectralMethod::KernelTable;
    else
      throw UsageError("--method must be auto, gram or kernel");
    try {
      const auto rep = l2_discrepancy_spectral_sum(ps, radii, opt);
      if (rep.clamped > 0) warn(std::to_string(rep.clamped) + " Gram entries below -1e-9 were clamped to 0");
      out.emit(report_json(rep), report_headline(rep));
    } catch (const TruncationError& e) {
      out.emit(report_json(e.best()), report_headline(e.best()));
      throw;
    }
  } else if (d_mc->parsed()) {
    const WeightedPointSet ps = mc_in.load();
    const auto mc = l2_discrepancy_montecarlo(ps, parse_radius(mc_r, "--r"), mc_samples, mc_seed, T);
    out.emit(to_json(mc), num(mc.estimate) + " ± " + num(mc.std_error));
  } else if (gram->parsed()) {
    const WeightedPointSet ps = g_in.load();
    const auto gs = gram_spectrum(ps, g_M, T);
    if (gs.clamped > 0) warn(std::to_string(gs.clamped) + " Gram entries below -1e-9 were clamped to 0");
    json rows = json::array();
    for (int m = 1; m <= g_M; ++m) rows.push_back(json{{"m", m}, {"S", gs.S[m - 1]}, {"dim", gs.dims[m - 1]}});
    out.emit(json{{"N", ps.size()}, {"clamped", gs.clamped}, {"min_raw", gs.min_raw}, {"spectrum", rows}});
  } else if (cub_check->parsed()) {
    const WeightedPointSet ps = cu_in.load();
    const auto st = cubature_strength(ps, cu_tol, cu_cap, T);
    out.emit(json{{"strength", st.strength}, {"capped", st.capped}, {"tol", cu_tol}, {"S", st.S}},
             "strength " + std::to_string(st.strength));
  } else if (p_gen->parsed()) {
    const Space sp = pg_sp.require();
    GeneratorSpec spec{generator_from_string(pg_gen), pg_count, pg_seed, pg_path};
    if ((spec.kind == GeneratorKind::UniformIID || spec.kind == GeneratorKind::FibonacciSphere) && pg_count == 0)
      throw UsageError("--count is required for this generator");
    const auto ps = generate(sp, spec, T);
    save_pointset(ps, pg_out, format_from_string(pg_format));
    out.emit(json{{"space", sp.name()}, {"N", ps.size()}, {"out", pg_out}});
  } else if (p_conv->parsed()) {
    const auto ps = pc_in.load();
    save_pointset(ps, pc_out, format_from_string(pc_format));
    out.emit(json{{"space", ps.space().name()}, {"N", ps.size()}, {"out", pc_out}});
  } else if (e_scal->parsed()) {
    ScalingSpec spec;
    std::vector<std::string> inputs;
    if (!es_config.empty()) {
      json cfg;
      try {
        cfg = json::parse(read_text_file(es_config));
      } catch (const json::exception& e) {
        throw DomainError(es_config + ": malformed JSON: " + e.what());
      }
      spec = scaling_spec_from_json(cfg);
      inputs.push_back(es_config);
    } else if (es_N.empty()) {
      throw UsageError("give --config or --N");
    }
    if (auto sp = es_sp.get()) spec.space = *sp;
    if (!es_gen.empty()) spec.generator = generator_from_string(es_gen);
    if (!es_N.empty()) spec.N_grid = es_N;
    if (!es_r.empty()) spec.r = parse_radius(es_r, "--r");
    if (es_two) spec.two_radius = true;
    if (es_seeds > 0) spec.seeds = es_seeds;
    if (es_seed_opt->count() > 0) spec.seed = es_seed;
    if (!es_policy.empty()) {
      if (es_policy == "scaled")
        spec.degree.policy = DegreePolicy::Scaled;
      else if (es_policy == "adaptive")
        spec.degree.policy = DegreePolicy::Adaptive;
      else
        throw UsageError("--degree-policy must be scaled or adaptive");
    }
    if (es_kappa > 0) spec.degree.kappa = es_kappa;
    if (es_tol > 0) spec.degree.tol = es_tol;
    if (T > 0) spec.threads = T;

    const json cell_cfg = scaling_cell_config(spec);
    CellCache cache(es_out, json_digest(cell_cfg), es_resume, warn);
    std::size_t done = 0;
    const std::size_t total = spec.N_grid.size() * static_cast<std::size_t>(std::max(spec.seeds, 0));
    const auto study = run_scaling(spec, &cache, [&](const std::string& msg) {
      std::cerr << "[" << ++done << "/" << total << "] " << msg << "\n";
    });
    json summary = to_json(study.summary);
    summary["config"] = to_json(spec);
    summary["cache"] = json{{"hits", cache.hits()}, {"misses", cache.misses()}};
    if (es_boot > 0) {
      const auto bs = bootstrap_slopes(study, es_boot, spec.seed);
      std::vector<double> sorted = bs;
      std::sort(sorted.begin(), sorted.end());
      const auto q = [&](double p) { return sorted[static_cast<std::size_t>(p * (sorted.size() - 1))]; };
      summary["bootstrap"] = json{{"replicates", es_boot}, {"q025", q(0.025)}, {"q975", q(0.975)}};
    }
    RunRecord rec = make_run_record(g.argv, to_json(spec), inputs);
    persist_results(rec, scaling_csv(study.cells), es_out, "scaling.csv");
    RunRecord rec_long = make_run_record(g.argv, to_json(spec), inputs);
    persist_results(rec_long, scaling_long_csv(study), es_out, "scaling_long.csv");
    RunRecord rec_sum = make_run_record(g.argv, to_json(spec), inputs);
    persist_results(rec_sum, summary.dump(2) + "\n", es_out, "scaling_summary.json");
    std::vector<std::string> outputs = rec.outputs;
    outputs.insert(outputs.end(), rec_long.outputs.begin(), rec_long.outputs.end());
    outputs.insert(outputs.end(), rec_sum.outputs.begin(), rec_sum.outputs.end());
    summary["outputs"] = outputs;
    out.emit(summary);
  } else if (e_sweep->parsed()) {
    std::vector<std::string> files = ew_in;
    if (!ew_dir.empty()) {
      std::vector<std::string> found;
      std::error_code ec;
      for (const auto& e : fs::directory_iterator(ew_dir, ec))
        if (e.is_regular_file()) found.push_back(e.path().string());
      if (ec) throw DomainError(ew_dir + ": " + ec.message());
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    }
    if (files.empty()) throw UsageError("give --in files or --designs");
    std::vector<SweepSet> sets;
    for (const auto& f : files) sets.push_back({fs::path(f).filename().string(), load_pointset(f)});
    const double rmax = ew_rmax.empty() ? kPi - kDefaultEndpointMargin : parse_radius(ew_rmax, "--r-max");
    const auto grid = linear_grid(parse_radius(ew_rmin, "--r-min"), rmax, ew_count);
    DegreeSettings deg;
    deg.kappa = ew_kappa;
    const auto res = run_radius_sweep(sets, grid, deg, kDefaultEndpointMargin, T);
    json j = to_json(res);
    const json cfg{{"files", files}, {"r_grid", grid}, {"kappa", ew_kappa}};
    RunRecord rec = make_run_record(g.argv, cfg, files);
    persist_results(rec, sweep_long_csv(res), ew_out, "sweep.csv");
    RunRecord rec_sum = make_run_record(g.argv, cfg, files);
    persist_results(rec_sum, j.dump(2) + "\n", ew_out, "sweep_summary.json");
    std::vector<std::string> outputs = rec.outputs;
    outputs.insert(outputs.end(), rec_sum.outputs.begin(), rec_sum.outputs.end());
    j["outputs"] = outputs;
    out.emit(j);
  } else if (e_bad->parsed()) {
    const Space sp = eb_sp.require();
    const double rmax = eb_rmax.empty() ? kPi - 0.05 : parse_radius(eb_rmax, "--r-max");
    const auto grid = linear_grid(parse_radius(eb_rmin, "--r-min"), rmax, eb_count);
    const auto rows = run_bad_radius_scan(sp, grid, eb_M, eb_delta, eb_thr, eb_m0, T);
    json jr = json::array();
    std::ostringstream csv;
    csv << "r,score,flagged\n";
    int flagged = 0;
    for (const auto& r : rows) {
      jr.push_back(json{{"r", r.r}, {"score", r.score}, {"flagged", r.flagged}});
      csv << num(r.r) << "," << num(r.score) << "," << (r.flagged ? 1 : 0) << "\n";
      flagged += r.flagged;
    }
    const json cfg{{"space", space_to_json(sp)}, {"r_grid", grid}, {"M_max", eb_M},
                   {"m0", eb_m0},                {"delta", eb_delta}, {"threshold", eb_thr}};
    RunRecord rec = make_run_record(g.argv, cfg);
    persist_results(rec, csv.str(), eb_out, "badradius.csv");
    out.emit(json{{"space", sp.name()}, {"flagged", flagged}, {"rows", jr}, {"outputs", rec.outputs}});
  }
  return 0;
}

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\nrun 'geodisc --help' for usage\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
