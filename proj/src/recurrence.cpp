#include "hclab/recurrence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/LU>
#include <Eigen/SVD>

#include "hclab/rng.hpp"

namespace hclab {

namespace {

constexpr std::size_t kMaxCurvePoints = 4096;

const char* kDisclaimer =
    "finite-dimensional truncation: densities are recurrence surrogates, not "
    "frequent-hypercyclicity certificates";

}  // namespace

VisitSet VisitSet::from_mask(double dt, std::vector<char> mask) {
  require(dt > 0.0, ErrorCode::ConfigInvalid, "dt must be positive");
  VisitSet s;
  s.kind = Kind::BooleanMask;
  s.dt = dt;
  s.t_max = mask.empty() ? 0.0 : dt * static_cast<double>(mask.size() - 1);
  s.mask = std::move(mask);
  return s;
}

VisitSet VisitSet::from_intervals(std::vector<std::pair<double, double>> intervals, double t_max) {
  VisitSet s;
  s.kind = Kind::IntervalList;
  s.t_max = t_max;
  std::sort(intervals.begin(), intervals.end());
  double prev_end = 0.0;
  for (auto& iv : intervals) {
    require(iv.first <= iv.second, ErrorCode::ConfigInvalid, "interval endpoints out of order");
    require(iv.first >= prev_end, ErrorCode::ConfigInvalid, "intervals must be disjoint");
    require(iv.second <= t_max, ErrorCode::ConfigInvalid, "interval exceeds the horizon");
    prev_end = iv.second;
  }
  s.intervals = std::move(intervals);
  return s;
}

DensityEstimate lower_density_discrete(const std::vector<long>& visits, long n_max) {
  require(n_max >= 1, ErrorCode::ConfigInvalid, "n_max must be >= 1");
  for (long v : visits) {
    require(v >= 1 && v <= n_max, ErrorCode::ConfigInvalid, "visits must lie in [1, n_max]");
  }
  std::vector<long> sorted = visits;
  std::sort(sorted.begin(), sorted.end());

  DensityEstimate est;
  est.horizon = static_cast<double>(n_max);
  est.burn_in = std::max(1.0, 0.01 * static_cast<double>(n_max));
  est.liminf_proxy = 1.0;
  const long stride = std::max<long>(1, n_max / static_cast<long>(kMaxCurvePoints));
  std::size_t idx = 0;
  long count = 0;
  for (long n = 1; n <= n_max; ++n) {
    while (idx < sorted.size() && sorted[idx] == n) {
      ++count;
      ++idx;
    }
    const double ratio = static_cast<double>(count) / static_cast<double>(n);
    if (static_cast<double>(n) >= est.burn_in) {
      est.liminf_proxy = std::min(est.liminf_proxy, ratio);
    }
    if (n % stride == 0 || n == n_max) {
      est.running.emplace_back(static_cast<double>(n), ratio);
    }
  }
  return est;
}

DensityEstimate lower_density_continuous(const VisitSet& set) {
  DensityEstimate est;
  est.horizon = set.t_max;
  est.burn_in = std::max(1.0, 0.01 * set.t_max);
  est.liminf_proxy = 1.0;

  if (set.kind == VisitSet::Kind::BooleanMask) {
    const std::size_t count = set.mask.size();
    const std::size_t stride = std::max<std::size_t>(1, count / kMaxCurvePoints);
    long hits = 0;
    for (std::size_t k = 1; k < count; ++k) {
      if (set.mask[k]) ++hits;
      const double t = set.dt * static_cast<double>(k);
      const double ratio = (set.dt * static_cast<double>(hits)) / t;
      if (t >= est.burn_in) est.liminf_proxy = std::min(est.liminf_proxy, ratio);
      if (k % stride == 0 || k + 1 == count) est.running.emplace_back(t, ratio);
    }
    if (count <= 1) est.liminf_proxy = 0.0;
    return est;
  }

  // Interval lists: the running ratio decreases on gaps and increases
  // inside intervals, so the window minimum is attained at the burn-in
  // point, at interval left endpoints, or at the horizon. Evaluate exactly.
  auto measure_up_to = [&](double t) {
    double m = 0.0;
    for (const auto& iv : set.intervals) {
      if (iv.first >= t) break;
      m += std::min(t, iv.second) - iv.first;
    }
    return m;
  };
  std::vector<double> candidates{est.burn_in, set.t_max};
  for (const auto& iv : set.intervals) {
    if (iv.first >= est.burn_in && iv.first <= set.t_max) candidates.push_back(iv.first);
  }
  for (double t : candidates) {
    if (t <= 0.0) continue;
    est.liminf_proxy = std::min(est.liminf_proxy, measure_up_to(t) / t);
  }
  for (const auto& iv : set.intervals) {
    if (iv.first > 0.0) est.running.emplace_back(iv.first, measure_up_to(iv.first) / iv.first);
    if (iv.second > 0.0) est.running.emplace_back(iv.second, measure_up_to(iv.second) / iv.second);
  }
  est.running.emplace_back(set.t_max, measure_up_to(set.t_max) / std::max(set.t_max, 1e-300));
  std::sort(est.running.begin(), est.running.end());
  return est;
}

void TargetSpec::validate(int order) const {
  require(!components.empty(), ErrorCode::ConfigInvalid, "W must be nonempty");
  for (int i : components) {
    require(i >= 0 && i < order, ErrorCode::MissingComponent,
            "component " + std::to_string(i) + " outside 0..n-1");
    if (!delta_mode) {
      auto it = targets.find(i);
      require(it != targets.end(), ErrorCode::MissingComponent,
              "no target given for component " + std::to_string(i));
      require(it->second.radius > 0.0, ErrorCode::ConfigInvalid, "radii must be positive");
    }
  }
  if (delta_mode) {
    require(delta_mode->ball_radius > 0.0, ErrorCode::ConfigInvalid, "radii must be positive");
  }
}

VisitSet visit_set(const DerivativeSeries& derivs, const TargetSpec& target) {
  target.validate(derivs.order());
  std::vector<char> mask(derivs.num_times(), 1);
  for (int i : target.components) {
    const auto& tgt = target.targets.at(i);
    require(tgt.center.size() == derivs.block_dim(), ErrorCode::DimMismatch,
            "target center dimension mismatch");
    for (int k = 0; k < derivs.num_times(); ++k) {
      if (!mask[k]) continue;
      const Vec u = derivs.components[i].col(k);
      if ((u - tgt.center).norm() >= tgt.radius) {
        mask[k] = 0;
        continue;
      }
      if (tgt.subspace && span_residual(u, *tgt.subspace) > tgt.membership_tol) mask[k] = 0;
    }
  }
  return VisitSet::from_mask(derivs.dt, std::move(mask));
}

DeltaModeTargets::DeltaModeTargets(const DeltaModeData& data, const BlockOperatorMatrix& delta)
    : lambda_(data.lambda), power_(data.power), radius_(data.ball_radius) {
  require(delta.form == BlockForm::Delta, ErrorCode::UnknownForm,
          "resolvent targets require the Delta form");
  require(power_ >= 1, ErrorCode::ConfigInvalid, "resolvent power must be >= 1");
  const int nd = delta.dim();
  block_dim_ = delta.block_dim;
  require(data.ball_center.size() == nd, ErrorCode::DimMismatch,
          "ball center dimension mismatch");
  const Mat shifted = lambda_ * Mat::Identity(nd, nd) - delta.flatten();
  {
    Eigen::BDCSVD<Mat> svd(shifted);
    require(svd.singularValues()(nd - 1) > 1e-10, ErrorCode::LambdaInSpectrum,
            "lambda is (numerically) in the spectrum of Delta");
  }
  forward_ = Mat::Identity(nd, nd);
  for (int k = 0; k < power_; ++k) forward_ = (shifted * forward_).eval();
  Eigen::PartialPivLU<Mat> lu(forward_);
  const Mat inverse = lu.solve(Mat::Identity(nd, nd));
  ball_center_ = data.ball_center;
  mapped_center_ = lu.solve(data.ball_center);
  for (int i = 0; i < delta.order; ++i) {
    const Mat rows = inverse.middleRows(i * block_dim_, block_dim_);
    Eigen::BDCSVD<Mat> svd(rows, Eigen::ComputeThinU);
    block_u_.push_back(svd.matrixU());
    block_sing_.push_back(svd.singularValues());
  }
}

bool DeltaModeTargets::full_state_member(const Vec& x) const {
  return (forward_ * x - ball_center_).norm() < radius_;
}

double DeltaModeTargets::component_distance(int block, const Vec& y) const {
  require(block >= 0 && block < static_cast<int>(block_u_.size()), ErrorCode::IndexOutOfRange,
          "block index out of range");
  require(y.size() == block_dim_, ErrorCode::DimMismatch, "component dimension mismatch");
  const Vec rhs = y - mapped_center_.segment(block * block_dim_, block_dim_);
  const Vec coeffs = block_u_[block].adjoint() * rhs;
  double norm2 = 0.0;
  for (int k = 0; k < coeffs.size(); ++k) {
    const double s = block_sing_[block](k);
    require(s > 0.0, ErrorCode::LambdaInSpectrum, "degenerate block row in the resolvent power");
    norm2 += std::norm(coeffs(k)) / (s * s);
  }
  return std::sqrt(norm2);
}

bool DeltaModeTargets::component_member(int block, const Vec& y) const {
  return component_distance(block, y) < radius_;
}

DeltaModeTargets delta_mode_targets(const TargetSpec& target, const BlockOperatorMatrix& delta) {
  require(target.delta_mode.has_value(), ErrorCode::ConfigInvalid,
          "target spec carries no resolvent-mode data");
  target.validate(delta.order);
  return DeltaModeTargets(*target.delta_mode, delta);
}

Vec synthesize_candidate(const SubspaceBasis& basis, const std::vector<Complex>& weights) {
  require(static_cast<int>(weights.size()) == basis.rank(), ErrorCode::LengthMismatch,
          "need one weight per basis column");
  Vec x = Vec::Zero(basis.columns.rows());
  for (int k = 0; k < basis.rank(); ++k) x += weights[k] * basis.columns.col(k);
  const double nrm = x.norm();
  require(nrm > 0.0, ErrorCode::ConfigInvalid, "candidate weights give the zero vector");
  return x / nrm;
}

Vec synthesize_candidate(const SubspaceBasis& basis, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Complex> weights(basis.rank());
  for (auto& w : weights) w = rng.cnormal();
  return synthesize_candidate(basis, weights);
}

HarnessReport fh_harness(const Trajectory& traj, const std::vector<OperatorHandle>& ops,
                         const TargetSpec& target, HarnessMode mode) {
  HarnessReport rep;
  rep.mode = mode;
  rep.horizon = traj.times.size() ? traj.times[traj.times.size() - 1] : 0.0;
  rep.disclaimer = kDisclaimer;

  if (mode == HarnessMode::Definition11) {
    const auto derivs = extract_derivatives(traj, ops);
    target.validate(derivs.order());
    rep.density = lower_density_continuous(visit_set(derivs, target));
    for (int i : target.components) {
      const auto& tgt = target.targets.at(i);
      double best = std::numeric_limits<double>::infinity();
      for (int k = 0; k < derivs.num_times(); ++k) {
        best = std::min(best, (derivs.components[i].col(k) - tgt.center).norm());
      }
      rep.nearest_approach[i] = best;
    }
    return rep;
  }

  // Definition 2.1 mode: the tested components are the recovered
  // combinations u^(i) + sum_j A_{n-j} u^(i-j), i.e. the Delta-state blocks.
  require(target.delta_mode.has_value(), ErrorCode::ConfigInvalid,
          "Definition 2.1 mode needs resolvent-mode data");
  target.validate(traj.order);
  const auto delta = build_delta(ops);
  const DeltaModeTargets predicates(*target.delta_mode, delta);

  const int d = traj.block_dim;
  Mat combos;
  if (traj.provenance == BlockForm::Delta) {
    combos = traj.states;
  } else if (traj.provenance == BlockForm::Companion) {
    const auto psi = build_psi(ops);
    combos.resize(traj.states.rows(), traj.states.cols());
    for (int k = 0; k < traj.num_times(); ++k) combos.col(k) = psi.apply(traj.states.col(k));
  } else {
    fail(ErrorCode::UnknownForm, "trajectory provenance is not a dynamical form");
  }

  std::vector<char> mask(traj.num_times(), 1);
  std::map<int, double> nearest;
  for (int i : target.components) nearest[i] = std::numeric_limits<double>::infinity();
  for (int k = 0; k < traj.num_times(); ++k) {
    for (int i : target.components) {
      const Vec y = combos.col(k).segment(i * d, d);
      const double dist = predicates.component_distance(i, y);
      nearest[i] = std::min(nearest[i], dist);
      if (dist >= target.delta_mode->ball_radius) {
        mask[k] = 0;
      } else {
        auto it = target.targets.find(i);
        if (it != target.targets.end() && it->second.subspace &&
            span_residual(y, *it->second.subspace) > it->second.membership_tol) {
          mask[k] = 0;
        }
      }
    }
  }
  rep.density = lower_density_continuous(VisitSet::from_mask(traj.dt, std::move(mask)));
  rep.nearest_approach = std::move(nearest);
  return rep;
}

}  // namespace hclab
