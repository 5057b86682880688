#include "hclab/scenarios.hpp"

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include <Eigen/Eigenvalues>

#include "hclab/backends.hpp"
#include "hclab/recurrence.hpp"
#include "hclab/rng.hpp"

namespace hclab {

namespace fs = std::filesystem;

double ScenarioConfig::number(const std::string& key, double fallback, bool positive) const {
  if (!document.contains(key)) return fallback;
  const auto& v = document.at(key);
  require(v.is_number(), ErrorCode::ConfigInvalid,
          "config field '" + key + "' must be a number");
  const double x = v.get<double>();
  require(!positive || x > 0.0, ErrorCode::ConfigInvalid,
          "config field '" + key + "' must be > 0");
  return x;
}

int ScenarioConfig::integer(const std::string& key, int fallback, int min_value) const {
  if (!document.contains(key)) return fallback;
  const auto& v = document.at(key);
  require(v.is_number_integer(), ErrorCode::ConfigInvalid,
          "config field '" + key + "' must be an integer");
  const int x = v.get<int>();
  require(x >= min_value, ErrorCode::ConfigInvalid,
          "config field '" + key + "' must be >= " + std::to_string(min_value));
  return x;
}

std::uint64_t ScenarioConfig::seed_value(std::uint64_t fallback) const {
  if (seed) return *seed;
  if (!document.contains("seed")) return fallback;
  const auto& v = document.at("seed");
  require(v.is_number_unsigned() || v.is_number_integer(), ErrorCode::ConfigInvalid,
          "config field 'seed' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

namespace {

int thread_budget() {
  if (const char* env = std::getenv("HC_LAB_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(std::min(hw, 4u));
}

/// Evaluates fn(0..count-1) with at most HC_LAB_THREADS workers; results
/// land by index, so the merged output never depends on scheduling.
template <typename Fn>
auto parallel_map(int count, Fn&& fn) {
  using Result = decltype(fn(0));
  std::vector<Result> out(count);
  const int workers = std::min(thread_budget(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) out[i] = fn(i);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

/// Declared-tolerance bookkeeping for the report's `checks` array.
class CheckTable {
 public:
  void upper_bound(const std::string& name, double value, double threshold) {
    const bool ok = value <= threshold;
    checks_.push_back(Json{{"name", name},
                           {"value", value},
                           {"threshold", threshold},
                           {"kind", "upper"},
                           {"pass", ok}});
    all_ = all_ && ok;
  }
  void lower_bound(const std::string& name, double value, double threshold) {
    const bool ok = value >= threshold;
    checks_.push_back(Json{{"name", name},
                           {"value", value},
                           {"threshold", threshold},
                           {"kind", "lower"},
                           {"pass", ok}});
    all_ = all_ && ok;
  }
  void boolean(const std::string& name, bool ok) {
    checks_.push_back(Json{{"name", name}, {"pass", ok}});
    all_ = all_ && ok;
  }
  bool all_pass() const { return all_; }
  Json json() const { return checks_; }

 private:
  Json checks_ = Json::array();
  bool all_ = true;
};

std::vector<double> chebyshev_points(double lo, double hi, int count) {
  std::vector<double> ts(count);
  for (int k = 0; k < count; ++k) {
    const double x = std::cos(M_PI * (2.0 * k + 1.0) / (2.0 * count));
    ts[k] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
  }
  return ts;
}

EigenField grid_mode_field(const GridSpec& grid, double lo, double hi, double tol) {
  EigenField f;
  f.lo = lo;
  f.hi = hi;
  f.symbol = SymbolCurve::identity(lo, hi);
  f.declared_tolerance = tol;
  const RealVec s = grid.nodes();
  f.evaluate = [s](double t) {
    Vec v(s.size());
    for (int j = 0; j < s.size(); ++j) v(j) = std::polar(1.0, t * s[j]);
    return v;
  };
  return f;
}

struct OutputPaths {
  fs::path root;
  fs::path curves;
  bool write_json = true;
  bool write_csv = true;
};

OutputPaths prepare_output(const ScenarioConfig& cfg) {
  OutputPaths out;
  out.root = cfg.out_dir;
  out.curves = out.root / "curves";
  if (cfg.report_format == "json") {
    out.write_csv = false;
  } else if (cfg.report_format == "csv") {
    out.write_json = false;
  } else {
    require(cfg.report_format == "both", ErrorCode::ConfigInvalid,
            "config field 'reportFormat' must be json, csv or both");
  }
  fs::create_directories(out.curves);
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorCode::ConfigInvalid, "cannot write " + path.string());
  os << text;
}

void write_csv_file(const OutputPaths& out, const std::string& name,
                    const std::function<void(std::ostream&)>& writer) {
  if (!out.write_csv) return;
  std::ofstream os(out.curves / name, std::ios::binary);
  writer(os);
}

std::string iso_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
  return buf;
}

Json certificate_json(const ConditionCertificate& cert) {
  Json off = Json::array();
  for (const auto& [deg, val] : cert.offending) {
    off.push_back(Json{{"degree", deg}, {"value", Json::array({val.real(), val.imag()})}});
  }
  return Json{{"holds", cert.holds}, {"offending", std::move(off)}};
}

// ---------------------------------------------------------------------------
// diag-rotation: first-order diagonal rotation model with frequencies
// (1, sqrt2, sqrt3); recurrence surrogate for an almost periodic orbit.
// ---------------------------------------------------------------------------
Json run_diag_rotation(const ScenarioConfig& cfg, const OutputPaths& out, CheckTable& checks) {
  const double t_max = cfg.t_max.value_or(cfg.number("tMax", 1e4));
  const double dt = cfg.dt.value_or(cfg.number("dt", 0.05));
  const double radius = cfg.number("radius", 0.3);
  const double t_star = cfg.number("tStar", 7.0);
  const std::uint64_t seed = cfg.seed_value(42);

  const std::vector<double> freqs{1.0, M_SQRT2, std::sqrt(3.0)};
  std::vector<Complex> mu;
  for (double f : freqs) mu.emplace_back(0.0, f);
  const auto a = diag_model(mu);

  // P_0(z) = -z gives A_0 = -A and the first-order problem u' = A u.
  std::vector<ComplexPoly> polys{ComplexPoly({Complex(0.0, 0.0), Complex(-1.0, 0.0)})};
  const auto cert =
      condition_holds_symbolic(SpectralCondition(1, polys, SymbolCurve::identity(0.0, 2.0)));
  checks.boolean("conditionHolds", cert.holds);

  const auto ops = operators_from_polynomials(polys, a);
  const auto companion = build_companion(ops);

  // Point-supported eigenfields: A e_k = i mu_k e_k.
  std::vector<CompanionEigenField> fields;
  std::vector<std::vector<double>> sample_ts;
  for (std::size_t k = 0; k < freqs.size(); ++k) {
    EigenField f;
    f.lo = f.hi = freqs[k];
    f.symbol = SymbolCurve::table({{freqs[k], mu[k]}});
    Vec e = Vec::Zero(3);
    e(static_cast<int>(k)) = 1.0;
    f.evaluate = [e](double) { return e; };
    fields.push_back(lift_theorem21(f, 1));
    sample_ts.push_back({freqs[k]});
  }
  double eigen_res = 0.0;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    const std::vector<double> ts{freqs[k]};
    eigen_res = std::max(eigen_res, eigen_residual(companion, fields[k], ts));
  }
  checks.upper_bound("eigenResidual", eigen_res, 1e-12);

  const auto basis = build_subspace(fields, sample_ts);
  const std::vector<Complex> equal(basis.rank(), Complex(1.0, 0.0));
  const Vec candidate = synthesize_candidate(basis, equal);
  checks.upper_bound("candidateSubspaceResidual", subspace_residual(candidate, basis), 1e-12);

  const auto traj = evolve(companion, candidate, EvolutionConfig(t_max, dt));
  const long kstar = std::lround(t_star / dt);
  TargetSpec target;
  target.components = {0};
  target.targets[0] = ComponentTarget{traj.states.col(kstar), radius, std::nullopt, 1e-6};
  const auto rep = fh_harness(traj, ops, target, HarnessMode::Definition11);
  checks.lower_bound("densityProxy", rep.density.liminf_proxy, 1e-3);

  write_csv_file(out, "density.csv",
                 [&](std::ostream& os) { write_density_csv(os, rep.density); });

  return Json{{"conditionCheck", certificate_json(cert)},
              {"eigenResiduals", Json{{"max", eigen_res}}},
              {"density", density_to_json(rep.density)},
              {"harness", harness_report_to_json(rep, target, seed)}};
}

// ---------------------------------------------------------------------------
// example23: translation-group backend (spectral derivative on a periodic
// grid), order-3 telescoping family, admissible-weight check, both lifts,
// and a long-horizon recurrence surrogate.
// ---------------------------------------------------------------------------
Json run_example23(const ScenarioConfig& cfg, const OutputPaths& out, CheckTable& checks) {
  const int n = 3;
  const int grid_n = cfg.grid_n.value_or(cfg.integer("gridN", 256, 16));
  const double t_max = cfg.t_max.value_or(cfg.number("tMax", 400.0));
  const double dt = cfg.dt.value_or(cfg.number("dt", 0.05));
  const double radius = cfg.number("radius", 0.3);
  const double t_star = cfg.number("tStar", 20.0);
  const std::uint64_t seed = cfg.seed_value(42);

  // Wide periodic box: integer frequencies stay resolved while the
  // operator norm (and with it the rounding floor of the eigen identities)
  // shrinks with 1/L.
  const GridSpec grid{16.0 * M_PI, grid_n, Boundary::Periodic};
  const auto d = derivative_matrix(grid);

  WeightSpec weight{RealVec::Constant(grid_n, 1.0), 1.0, 0.0};
  const auto wres = admissible_weight_check(weight, grid);
  checks.boolean("weightAdmissible", wres.admissible);

  // Telescoping family: P_2 = -z + 3, P_1 = -3z + 3, P_0 = -3z keeps the
  // characteristic condition exact and every lift block nonzero.
  std::vector<ComplexPoly> polys(n);
  polys[2] = ComplexPoly({Complex(3.0, 0.0), Complex(-1.0, 0.0)});
  polys[1] = ComplexPoly({Complex(3.0, 0.0), Complex(-3.0, 0.0)});
  polys[0] = ComplexPoly({Complex(0.0, 0.0), Complex(-3.0, 0.0)});
  const auto cert =
      condition_holds_symbolic(SpectralCondition(n, polys, SymbolCurve::identity(-5, 5)));
  checks.boolean("conditionHolds", cert.holds);

  const auto ops = operators_from_polynomials(polys, d);
  const auto companion = build_companion(ops);
  const auto delta = build_delta(ops);
  const auto field = grid_mode_field(grid, -5.0, 5.0, 1e-12);
  const auto f21 = lift_theorem21(field, n);
  const auto f22 = lift_theorem22(field, n, ops);

  std::vector<double> ts;
  for (int t = -5; t <= 5; ++t) {
    if (t != 0) ts.push_back(t);
  }
  Json residual_rows = Json::array();
  double worst21 = 0.0, worst22 = 0.0;
  for (double t : ts) {
    const std::vector<double> single{t};
    const double r21 = eigen_residual(companion, f21, single);
    const double r22 = eigen_residual(delta, f22, single);
    worst21 = std::max(worst21, r21);
    worst22 = std::max(worst22, r22);
    residual_rows.push_back(Json{{"t", t}, {"companion", r21}, {"delta", r22}});
  }
  checks.upper_bound("eigenResidualCompanion", worst21, 1e-12);
  checks.upper_bound("eigenResidualDelta", worst22, 1e-12);

  const auto basis = build_subspace({f22}, {ts});
  const Vec candidate = synthesize_candidate(basis, seed);

  // Accuracy leg: small steps so the differenced equation residual sits at
  // the dt^2 floor.
  {
    const auto traj = evolve(delta, candidate, EvolutionConfig(2.0, 1e-3));
    const auto derivs = extract_derivatives(traj, ops);
    checks.upper_bound("acpResidual", acp_residual(derivs, ops), 1e-3);
  }

  // Recurrence leg: integer frequencies make the orbit 2pi-periodic, so
  // the density estimate stabilizes quickly.
  const auto traj = evolve(delta, candidate, EvolutionConfig(t_max, dt));
  const auto derivs = extract_derivatives(traj, ops);
  const long kstar = std::lround(t_star / dt);
  TargetSpec target;
  target.components = {0};
  target.targets[0] = ComponentTarget{derivs.components[0].col(kstar), radius, std::nullopt, 1e-6};
  const auto rep = fh_harness(traj, ops, target, HarnessMode::Definition11);
  checks.lower_bound("densityProxy", rep.density.liminf_proxy, 1e-3);

  write_csv_file(out, "density.csv",
                 [&](std::ostream& os) { write_density_csv(os, rep.density); });
  write_csv_file(out, "eigen_residual.csv", [&](std::ostream& os) {
    os << "t,companion,delta\n";
    for (const auto& row : residual_rows) {
      os << format_double(row.at("t").get<double>()) << ','
         << format_double(row.at("companion").get<double>()) << ','
         << format_double(row.at("delta").get<double>()) << '\n';
    }
  });

  return Json{
      {"conditionCheck", certificate_json(cert)},
      {"weightCheck", Json{{"admissible", wres.admissible}, {"worstRatio", wres.worst_ratio}}},
      {"eigenResiduals",
       Json{{"companion", worst21}, {"delta", worst22}, {"perSample", residual_rows}}},
      {"subspaceRank", basis.rank()},
      {"density", density_to_json(rep.density)},
      {"harness", harness_report_to_json(rep, target, seed)}};
}

// ---------------------------------------------------------------------------
// example21: Ornstein-Uhlenbeck backend. Fine grid for the eigenfunction
// residual table, coarser grid for the order-4 block dynamics, whose eigen
// residual is finite-difference-limited and reported as such.
// ---------------------------------------------------------------------------
Json run_example21(const ScenarioConfig& cfg, const OutputPaths& out, CheckTable& checks) {
  const int n = 4;
  const OUParams params(cfg.number("b", 1.0), cfg.number("c", 2.0));
  const Complex c1(cfg.number("c1", 1.0, false), 0.0);
  const int grid_n = cfg.grid_n.value_or(cfg.integer("gridN", 2048, 64));
  const int dyn_grid_n = cfg.integer("dynGridN", 160, 16);
  const double half_width = cfg.number("halfWidth", 20.0);
  const double field_interval = cfg.number("fieldInterval", 1.5);
  const std::uint64_t seed = cfg.seed_value(42);

  // P_3 = -z + c1, P_2 = -c1 z; the remaining polynomials vanish.
  std::vector<ComplexPoly> polys(n);
  polys[3] = ComplexPoly({c1, Complex(-1.0, 0.0)});
  polys[2] = ComplexPoly({Complex(0.0, 0.0), -c1});
  const auto cert =
      condition_holds_symbolic(SpectralCondition(n, polys, SymbolCurve::identity(-2, 2)));
  checks.boolean("conditionHolds", cert.holds);

  // Spectral leg: residual table on the fine grid.
  const GridSpec fine{half_width, grid_n, Boundary::Decaying};
  Json ou_rows = Json::array();
  Vec shown_eigenfunction;
  double worst_fn_residual = 0.0;
  {
    const auto a = ou_matrix(params, fine);
    struct Case {
      Complex lambda;
      int branch;
    };
    std::vector<Case> cases;
    for (double t : {0.5, 1.0, 1.5}) {
      cases.push_back({Complex(0.0, t), 1});
      cases.push_back({Complex(0.0, t), 2});
    }
    const auto rows = parallel_map(static_cast<int>(cases.size()), [&](int i) {
      const Vec f = ou_eigenfunction(cases[i].lambda, cases[i].branch, params, fine);
      const double r = (a.entries * f - cases[i].lambda * f).norm();
      return std::pair<double, Vec>(r, f);
    });
    for (std::size_t i = 0; i < cases.size(); ++i) {
      worst_fn_residual = std::max(worst_fn_residual, rows[i].first);
      ou_rows.push_back(Json{{"lambdaIm", cases[i].lambda.imag()},
                             {"branch", cases[i].branch},
                             {"gridN", grid_n},
                             {"residual", rows[i].first}});
    }
    shown_eigenfunction = rows[3].second;  // lambda = i, branch 2
    checks.upper_bound("eigenfunctionResidual", worst_fn_residual, 1e-3);
  }
  write_csv_file(out, "eigenfunction.csv", [&](std::ostream& os) {
    write_eigenfunction_csv(os, fine.nodes(), shown_eigenfunction);
  });

  // Dynamics leg on the coarse grid: operator-weighted lift, Delta
  // evolution and the equation residual. The eigen residual here is limited
  // by the second-order stencils, not by the lift algebra.
  const GridSpec coarse{half_width, dyn_grid_n, Boundary::Decaying};
  const auto a = ou_matrix(params, coarse);
  const auto ops = operators_from_polynomials(polys, a);
  const auto delta = build_delta(ops);

  std::vector<CompanionEigenField> fields;
  std::vector<std::vector<double>> sample_ts;
  const auto cheb = chebyshev_points(-field_interval, field_interval, 17);
  for (int branch : {1, 2}) {
    EigenField f;
    f.lo = -field_interval;
    f.hi = field_interval;
    f.symbol = SymbolCurve::identity(-field_interval, field_interval);
    f.declared_tolerance = 5e-2;
    f.evaluate = [params, coarse, branch](double t) {
      return ou_eigenfunction(Complex(0.0, t), branch, params, coarse);
    };
    fields.push_back(lift_theorem22(f, n, ops));
    sample_ts.push_back(cheb);
  }
  double worst_lift_residual = 0.0;
  Json lift_rows = Json::array();
  for (std::size_t j = 0; j < fields.size(); ++j) {
    for (double t : sample_ts[j]) {
      const std::vector<double> single{t};
      const double r = eigen_residual(delta, fields[j], single);
      worst_lift_residual = std::max(worst_lift_residual, r);
      lift_rows.push_back(Json{{"branch", static_cast<int>(j + 1)}, {"t", t}, {"residual", r}});
    }
  }
  checks.upper_bound("liftEigenResidual", worst_lift_residual,
                     cfg.number("liftResidualTol", 0.1));

  const auto basis = build_subspace(fields, sample_ts);
  const Vec candidate = synthesize_candidate(basis, seed);

  // The candidate unavoidably carries grid-scale components (they live in
  // the sampled eigenfunctions themselves), so the equation residual is
  // gated on its dt^2 convergence alongside a coarse absolute bound.
  {
    auto residual_at = [&](double dtv) {
      const auto traj = evolve(delta, candidate, EvolutionConfig(1.0, dtv));
      const auto derivs = extract_derivatives(traj, ops);
      return acp_residual(derivs, ops);
    };
    const double r1 = residual_at(1e-3);
    const double r2 = residual_at(5e-4);
    checks.upper_bound("acpResidual", r1, cfg.number("acpResidualTol", 0.1));
    const double ratio = r2 > 0.0 ? r1 / r2 : 4.0;
    checks.lower_bound("acpConvergenceRatio", ratio, 3.0);
    checks.upper_bound("acpConvergenceRatioUpper", ratio, 5.0);
  }

  // Short recurrence window, reported without a gate: the coarse-grid
  // spectrum leaks into the right half-plane, so long horizons leave the
  // sampled eigenspace.
  const double t_max = cfg.t_max.value_or(cfg.number("tMax", 6.0));
  const double dt = cfg.dt.value_or(cfg.number("dt", 0.01));
  const auto traj = evolve(delta, candidate, EvolutionConfig(t_max, dt));
  const auto derivs = extract_derivatives(traj, ops);
  const long kstar = std::lround(cfg.number("tStar", 1.0) / dt);
  TargetSpec target;
  target.components = {0};
  target.targets[0] = ComponentTarget{derivs.components[0].col(kstar), cfg.number("radius", 0.3),
                                      std::nullopt, 1e-6};
  const auto rep = fh_harness(traj, ops, target, HarnessMode::Definition11);

  TargetSpec resolvent_target;
  resolvent_target.components = {0, 1, 2, 3};
  const Complex lambda(cfg.number("resolventLambda", 3.5, false), 0.0);
  Mat fwd = Mat::Identity(delta.dim(), delta.dim());
  const Mat shifted = lambda * Mat::Identity(delta.dim(), delta.dim()) - delta.flatten();
  for (int k = 0; k < n; ++k) fwd = (shifted * fwd).eval();
  resolvent_target.delta_mode =
      DeltaModeData{lambda, n, fwd * traj.states.col(kstar), cfg.number("resolventRadius", 0.5)};
  const auto rep21 = fh_harness(traj, ops, resolvent_target, HarnessMode::Definition21);

  write_csv_file(out, "density.csv",
                 [&](std::ostream& os) { write_density_csv(os, rep.density); });
  write_csv_file(out, "ou_residuals.csv", [&](std::ostream& os) {
    os << "lambda_im,branch,grid_n,residual\n";
    for (const auto& row : ou_rows) {
      os << format_double(row.at("lambdaIm").get<double>()) << ',' << row.at("branch").get<int>()
         << ',' << row.at("gridN").get<int>() << ','
         << format_double(row.at("residual").get<double>()) << '\n';
    }
  });
  write_csv_file(out, "eigen_residual.csv", [&](std::ostream& os) {
    os << "branch,t,residual\n";
    for (const auto& row : lift_rows) {
      os << row.at("branch").get<int>() << ',' << format_double(row.at("t").get<double>()) << ','
         << format_double(row.at("residual").get<double>()) << '\n';
    }
  });

  return Json{{"conditionCheck", certificate_json(cert)},
              {"eigenfunctionResiduals", ou_rows},
              {"eigenResiduals",
               Json{{"delta", worst_lift_residual},
                    {"note", "limited by the second-order stencils on the coarse grid"}}},
              {"subspaceRank", basis.rank()},
              {"density", density_to_json(rep.density)},
              {"harness", harness_report_to_json(rep, target, seed)},
              {"resolventHarness", harness_report_to_json(rep21, resolvent_target, seed)}};
}

// ---------------------------------------------------------------------------
// delta-vs-companion: seeded random instance, both reductions evolved from
// Psi-matched initial data, agreement and spectra compared.
// ---------------------------------------------------------------------------
Json run_delta_vs_companion(const ScenarioConfig& cfg, const OutputPaths& out,
                            CheckTable& checks) {
  const int n = cfg.integer("order", 3, 1);
  const int d = cfg.integer("blockDim", 4, 1);
  const double t_max = cfg.t_max.value_or(cfg.number("tMax", 10.0));
  const double dt = cfg.dt.value_or(cfg.number("dt", 1e-3));
  const std::uint64_t seed = cfg.seed_value(7);

  Rng rng(seed);
  std::vector<OperatorHandle> ops;
  for (int l = 0; l < n; ++l) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) m(i, j) = 0.5 * rng.cnormal();
    ops.emplace_back(std::move(m), "A" + std::to_string(l));
  }
  // Rescale so the companion spectrum stays mildly stable over the horizon:
  // A_l -> A_l / c^{n-l} scales every eigenvalue by 1/c.
  {
    const auto comp = build_companion(ops);
    Eigen::ComplexEigenSolver<Mat> es(comp.flatten());
    double abscissa = 0.0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
      abscissa = std::max(abscissa, es.eigenvalues()(i).real());
    }
    if (abscissa > 0.3) {
      const double c = abscissa / 0.3;
      for (int l = 0; l < n; ++l) ops[l].entries /= std::pow(c, n - l);
    }
  }

  const auto companion = build_companion(ops);
  const auto delta = build_delta(ops);
  const auto psi = build_psi(ops);

  double psi_roundtrip = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    Vec v(n * d);
    for (int i = 0; i < v.size(); ++i) v(i) = rng.cnormal();
    psi_roundtrip =
        std::max(psi_roundtrip, (psi.apply(psi_apply_inverse(psi, v)) - v).norm() / v.norm());
  }
  checks.upper_bound("psiRoundTrip", psi_roundtrip, 1e-12);

  InitialData init;
  for (int i = 0; i < n; ++i) {
    Vec u(d);
    for (int j = 0; j < d; ++j) u(j) = rng.cnormal();
    init.components.push_back(u / u.norm());
  }
  const Vec x0 = init.stacked();
  const Vec y0 = derivatives_to_delta_state(ops, init);

  const auto traj_c = evolve(companion, x0, EvolutionConfig(t_max, dt));
  const auto traj_d = evolve(delta, y0, EvolutionConfig(t_max, dt));

  double scale = 1.0;
  for (int k = 0; k < traj_c.num_times(); ++k) {
    scale = std::max(scale, traj_c.states.col(k).head(d).norm());
  }
  double deviation = 0.0;
  std::vector<std::pair<double, double>> dev_curve;
  const int stride = std::max(1, traj_c.num_times() / 2000);
  for (int k = 0; k < traj_c.num_times(); ++k) {
    const double dev =
        (traj_c.states.col(k).head(d) - traj_d.states.col(k).head(d)).norm() / scale;
    deviation = std::max(deviation, dev);
    if (k % stride == 0) dev_curve.emplace_back(traj_c.times[k], dev);
  }
  checks.upper_bound("uBlockDeviation", deviation, 1e-8);

  std::vector<Complex> evc, evd;
  {
    Eigen::ComplexEigenSolver<Mat> ec(companion.flatten());
    Eigen::ComplexEigenSolver<Mat> ed(delta.flatten());
    for (int i = 0; i < n * d; ++i) {
      evc.push_back(ec.eigenvalues()(i));
      evd.push_back(ed.eigenvalues()(i));
    }
    auto lex = [](Complex a, Complex b) {
      if (a.real() != b.real()) return a.real() < b.real();
      return a.imag() < b.imag();
    };
    std::sort(evc.begin(), evc.end(), lex);
    std::sort(evd.begin(), evd.end(), lex);
  }
  double spec_dist = 0.0;
  for (std::size_t i = 0; i < evc.size(); ++i) {
    spec_dist = std::max(spec_dist, std::abs(evc[i] - evd[i]));
  }
  checks.upper_bound("spectraMatch", spec_dist, 1e-8);

  const auto derivs = extract_derivatives(traj_c, ops);
  checks.upper_bound("acpResidual", acp_residual(derivs, ops), 1e-5);

  TargetSpec target;
  target.components = {0};
  const long kstar = std::lround(5.0 / dt);
  target.targets[0] = ComponentTarget{traj_c.states.col(kstar).head(d), cfg.number("radius", 0.5),
                                      std::nullopt, 1e-6};
  const auto rep = fh_harness(traj_c, ops, target, HarnessMode::Definition11);

  write_csv_file(out, "deviation.csv", [&](std::ostream& os) {
    os << "t,deviation\n";
    for (const auto& [t, v] : dev_curve) {
      os << format_double(t) << ',' << format_double(v) << '\n';
    }
  });
  write_csv_file(out, "density.csv",
                 [&](std::ostream& os) { write_density_csv(os, rep.density); });

  return Json{{"uBlockDeviation", deviation},
              {"psiRoundTrip", psi_roundtrip},
              {"spectraMatch", spec_dist},
              {"density", density_to_json(rep.density)},
              {"harness", harness_report_to_json(rep, target, seed)}};
}

}  // namespace

std::vector<ScenarioInfo> list_scenarios() {
  return {
      {"example21",
       "Ornstein-Uhlenbeck backend: order-4 polynomial family, eigenfunction residual table, "
       "operator-weighted lift and Delta dynamics"},
      {"example23",
       "periodic translation backend: admissible weight, order-3 family, both lifts, "
       "long-horizon recurrence surrogate"},
      {"diag-rotation",
       "diagonal rotation model (1, sqrt2, sqrt3): recurrence density of an almost periodic "
       "orbit"},
      {"delta-vs-companion",
       "seeded random instance: companion vs Delta evolution through Psi-matched data, spectra "
       "and equation residuals"},
  };
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) {
  const auto out = prepare_output(cfg);
  CheckTable checks;
  Json body;
  std::uint64_t default_seed = 42;
  if (cfg.scenario == "diag-rotation") {
    body = run_diag_rotation(cfg, out, checks);
  } else if (cfg.scenario == "example23") {
    body = run_example23(cfg, out, checks);
  } else if (cfg.scenario == "example21") {
    body = run_example21(cfg, out, checks);
  } else if (cfg.scenario == "delta-vs-companion") {
    default_seed = 7;
    body = run_delta_vs_companion(cfg, out, checks);
  } else {
    fail(ErrorCode::ConfigInvalid, "unknown scenario '" + cfg.scenario + "'");
  }

  Json report{{"scenario", cfg.scenario}, {"seed", cfg.seed_value(default_seed)}};
  for (auto& [key, value] : body.items()) report[key] = value;
  report["checks"] = checks.json();
  report["pass"] = checks.all_pass();
  report["disclaimer"] =
      "finite-dimensional truncation: densities are recurrence surrogates, not "
      "frequent-hypercyclicity certificates";

  if (out.write_json) {
    write_text(out.root / "report.json", report.dump(2) + "\n");
  }
  write_text(out.root / "meta.json",
             Json{{"timestamp", iso_timestamp()},
                  {"scenario", cfg.scenario},
                  {"generator", "hclab"},
                  {"reportFormat", cfg.report_format}}
                     .dump(2) +
                 "\n");

  ScenarioResult res;
  res.exit_code = checks.all_pass() ? 0 : 1;
  res.report = std::move(report);
  return res;
}

}  // namespace hclab
