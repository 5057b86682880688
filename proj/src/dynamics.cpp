#include "hclab/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>

namespace hclab {

EvolutionConfig::EvolutionConfig(double t_max_, double dt_) : t_max(t_max_), dt(dt_) {
  require(t_max > 0.0 && dt > 0.0, ErrorCode::ConfigInvalid, "t_max and dt must be positive");
  require(t_max / dt <= 1e7, ErrorCode::ConfigInvalid,
          "t_max/dt exceeds the desk-scale step guard (1e7)");
}

long EvolutionConfig::steps() const { return std::lround(t_max / dt); }

namespace {

Trajectory evolve_matrix(const Mat& m, const Vec& x0, const EvolutionConfig& cfg,
                         BlockForm provenance, int order, int block_dim) {
  require(m.rows() == x0.size(), ErrorCode::DimMismatch,
          "initial state does not match the operator dimension");
  const long steps = cfg.steps();
  const Mat step = matrix_exponential(cfg.dt * m);
  Trajectory traj;
  traj.provenance = provenance;
  traj.order = order;
  traj.block_dim = block_dim;
  traj.dt = cfg.dt;
  traj.times.resize(steps + 1);
  traj.states.resize(x0.size(), steps + 1);
  traj.states.col(0) = x0;
  traj.times[0] = 0.0;
  for (long k = 1; k <= steps; ++k) {
    traj.states.col(k).noalias() = step * traj.states.col(k - 1);
    traj.times[k] = k * cfg.dt;
    if (!traj.states.col(k).allFinite()) {
      fail(ErrorCode::NonfiniteState,
           "state overflowed at t = " + std::to_string(traj.times[k]) +
               "; spectrum too far in the right half-plane for this horizon");
    }
  }
  return traj;
}

}  // namespace

Trajectory evolve(const BlockOperatorMatrix& m, const Vec& x0, const EvolutionConfig& cfg) {
  return evolve_matrix(m.flatten(), x0, cfg, m.form, m.order, m.block_dim);
}

Trajectory evolve(const OperatorHandle& m, const Vec& x0, const EvolutionConfig& cfg) {
  return evolve_matrix(m.entries, x0, cfg, BlockForm::Companion, 1, m.dim());
}

DerivativeSeries extract_derivatives(const Trajectory& traj, const std::vector<OperatorHandle>& ops) {
  const int n = traj.order;
  const int d = traj.block_dim;
  require(static_cast<int>(ops.size()) == n, ErrorCode::DimMismatch,
          "need one operator per derivative order");
  DerivativeSeries out;
  out.times = traj.times;
  out.dt = traj.dt;
  out.components.assign(n, Mat(d, traj.num_times()));
  if (traj.provenance == BlockForm::Companion) {
    for (int i = 0; i < n; ++i) out.components[i] = traj.states.middleRows(i * d, d);
    return out;
  }
  if (traj.provenance == BlockForm::Delta) {
    const auto psi = build_psi(ops);
    for (int k = 0; k < traj.num_times(); ++k) {
      const Vec y = psi_apply_inverse(psi, traj.states.col(k));
      for (int i = 0; i < n; ++i) out.components[i].col(k) = y.segment(i * d, d);
    }
    return out;
  }
  fail(ErrorCode::UnknownForm, "trajectory provenance is not a dynamical form");
}

double acp_residual(const DerivativeSeries& derivs, const std::vector<OperatorHandle>& ops) {
  const int n = derivs.order();
  require(static_cast<int>(ops.size()) == n, ErrorCode::DimMismatch,
          "need one operator per derivative order");
  require(derivs.num_times() >= 3, ErrorCode::EmptySamples,
          "need at least three time samples for differencing");
  const double dt = derivs.dt;
  double worst = 0.0;
  for (int k = 1; k + 1 < derivs.num_times(); ++k) {
    Vec acc = (derivs.components[n - 1].col(k + 1) - derivs.components[n - 1].col(k - 1)) /
              (2.0 * dt);
    for (int i = 0; i < n; ++i) {
      acc.noalias() += ops[i].entries * derivs.components[i].col(k);
    }
    const double scale = std::max(1.0, derivs.components[0].col(k).norm());
    worst = std::max(worst, acc.norm() / scale);
  }
  return worst;
}

RegularizedPair build_regularizer(const OperatorHandle& a, RegularizerKind kind, Complex lambda0,
                                  int power) {
  const int d = a.dim();
  Mat c;
  if (kind == RegularizerKind::SpectralGaussian) {
    Eigen::ComplexEigenSolver<Mat> es(a.entries);
    require(es.info() == Eigen::Success, ErrorCode::NotDiagonalizable,
            "eigendecomposition failed");
    const Mat v = es.eigenvectors();
    Eigen::JacobiSVD<Mat> svd(v);
    const double cond = svd.singularValues()(0) / svd.singularValues()(d - 1);
    require(std::isfinite(cond) && cond < 1e8, ErrorCode::NotDiagonalizable,
            "eigenbasis condition number " + std::to_string(cond) + " exceeds 1e8");
    Vec h(d);
    for (int i = 0; i < d; ++i) {
      const Complex z = es.eigenvalues()(i);
      h(i) = std::exp(-std::norm(z));
    }
    c = v * h.asDiagonal() * v.inverse();
  } else {
    require(power >= 1, ErrorCode::ConfigInvalid, "resolvent power must be >= 1");
    const Mat shifted = lambda0 * Mat::Identity(d, d) - a.entries;
    Eigen::JacobiSVD<Mat> svd(shifted);
    const double smin = svd.singularValues()(d - 1);
    require(smin > 1e-10 * std::max(1.0, a.entries.norm()), ErrorCode::LambdaInSpectrum,
            "lambda0 is (numerically) in the spectrum");
    Eigen::PartialPivLU<Mat> lu(shifted);
    c = Mat::Identity(d, d);
    for (int k = 0; k < power; ++k) c = lu.solve(c);
  }

  RegularizedPair pair;
  pair.a = a;
  pair.c = OperatorHandle(c, "C");
  const double denom = std::max(1e-300, a.entries.norm() * c.norm());
  pair.commutator_residual = (a.entries * c - c * a.entries).norm() / denom;
  Eigen::JacobiSVD<Mat> csvd(c);
  pair.smallest_singular_value = csvd.singularValues()(d - 1);
  require(pair.commutator_residual <= 1e-10, ErrorCode::ConfigInvalid,
          "constructed C fails the commutation invariant");
  require(pair.smallest_singular_value > 0.0, ErrorCode::ConfigInvalid,
          "constructed C is numerically singular");
  return pair;
}

namespace {

// Adaptive Simpson for matrix-valued integrands, Frobenius-norm control.
Mat simpson_recurse(const std::function<Mat(double)>& f, double a, double b, const Mat& fa,
                    const Mat& fm, const Mat& fb, const Mat& whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const Mat fl = f(0.5 * (a + m));
  const Mat fr = f(0.5 * (m + b));
  const Mat left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
  const Mat right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
  const Mat sum = left + right;
  if (depth <= 0 || (sum - whole).norm() <= 15.0 * tol) {
    return sum + (sum - whole) / 15.0;
  }
  return simpson_recurse(f, a, m, fa, fl, fm, left, 0.5 * tol, depth - 1) +
         simpson_recurse(f, m, b, fm, fr, fb, right, 0.5 * tol, depth - 1);
}

Mat integrate_matrix(const std::function<Mat(double)>& f, double a, double b, double tol) {
  const Mat fa = f(a);
  const Mat fb = f(b);
  const Mat fm = f(0.5 * (a + b));
  const Mat whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_recurse(f, a, b, fa, fm, fb, whole, tol, 32);
}

}  // namespace

double CRegularizedReport::worst() const {
  return std::max(std::max(commute_with_a, commute_with_c),
                  std::max(integral_identity, composition_law));
}

CRegularizedReport cregularized_check(const RegularizedPair& pair, std::span<const double> ts) {
  require(!ts.empty(), ErrorCode::EmptySamples, "no sample times given");
  const Mat& a = pair.a.entries;
  const Mat& c = pair.c.entries;
  auto semigroup = [&](double t) -> Mat { return matrix_exponential(t * a) * c; };

  CRegularizedReport rep;
  for (double t : ts) {
    const Mat tt = semigroup(t);
    rep.commute_with_a = std::max(rep.commute_with_a, (tt * a - a * tt).norm());
    rep.commute_with_c = std::max(rep.commute_with_c, (tt * c - c * tt).norm());
    const Mat integral = integrate_matrix(semigroup, 0.0, t, 1e-10);
    rep.integral_identity = std::max(rep.integral_identity, (a * integral - (tt - c)).norm());
    for (double s : ts) {
      const Mat comp = tt * semigroup(s) - semigroup(t + s) * c;
      rep.composition_law = std::max(rep.composition_law, comp.norm());
    }
  }
  return rep;
}

}  // namespace hclab
