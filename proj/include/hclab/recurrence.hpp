#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hclab/dynamics.hpp"
#include "hclab/eigenfields.hpp"
#include "hclab/types.hpp"

namespace hclab {

/// Visit-time set over [0, t_max]: either a boolean mask on uniform sample
/// times (measure = dt-quadrature of the indicator) or an exact sorted
/// disjoint interval list.
struct VisitSet {
  enum class Kind { BooleanMask, IntervalList };
  Kind kind = Kind::BooleanMask;
  double t_max = 0.0;
  double dt = 0.0;
  std::vector<char> mask;  // mask[k] <-> time k*dt
  std::vector<std::pair<double, double>> intervals;

  static VisitSet from_mask(double dt, std::vector<char> mask);
  static VisitSet from_intervals(std::vector<std::pair<double, double>> intervals, double t_max);
};

/// Running ratio m(T cap [0,t]) / t plus a finite-horizon liminf proxy: the
/// minimum of the running ratio over [t0, t_max] with burn-in
/// t0 = max(1, 0.01 t_max). A true liminf is out of reach at finite
/// horizon; the proxy lower-bounds the tail of the running ratio.
struct DensityEstimate {
  std::vector<std::pair<double, double>> running;  // decimated (t, ratio) curve
  double liminf_proxy = 0.0;
  double burn_in = 0.0;
  double horizon = 0.0;
};

/// Discrete lower-density estimate for T subset of [1, n_max].
DensityEstimate lower_density_discrete(const std::vector<long>& visits, long n_max);

/// Continuous lower-density estimate; exact for interval lists.
DensityEstimate lower_density_continuous(const VisitSet& set);

/// Open-ball target around `center` for one recovered component, with an
/// optional subspace constraint (membership tolerance on the residual,
/// since exact membership in a measure-zero subspace never triggers on
/// floating-point orbits).
struct ComponentTarget {
  Vec center;
  double radius = 1.0;
  std::optional<Mat> subspace;  // orthonormal columns spanning E_i
  double membership_tol = 1e-6;
};

/// Data for resolvent-mapped targets: the source open set V is the ball
/// B(ball_center, ball_radius) in the stacked space, tested through
/// (lambda - Delta)^{-power}.
struct DeltaModeData {
  Complex lambda;
  int power = 1;
  Vec ball_center;
  double ball_radius = 1.0;
};

struct TargetSpec {
  std::vector<int> components;  // W, nonempty subset of {0..n-1}
  std::map<int, ComponentTarget> targets;
  std::optional<DeltaModeData> delta_mode;

  void validate(int order) const;
};

/// Boolean-mask visit set: time t is in iff for every i in W the component
/// u^(i)(t) lies in its open ball and (when constrained) within the
/// membership tolerance of E_i.
VisitSet visit_set(const DerivativeSeries& derivs, const TargetSpec& target);

/// Membership predicates realizing pi_{i+1}((lambda - Delta)^{-n}(V)).
///
/// A point x of the stacked space lies in (lambda-Delta)^{-n}(V) iff
/// (lambda-Delta)^n x lies in V. A single block y lies in the projection
/// of the mapped ball iff the minimum-norm preimage under the block row of
/// (lambda-Delta)^{-n} stays inside the ball radius; that reduction is an
/// SVD least-norm solve per block.
class DeltaModeTargets {
 public:
  DeltaModeTargets(const DeltaModeData& data, const BlockOperatorMatrix& delta);

  bool full_state_member(const Vec& x) const;
  bool component_member(int block, const Vec& y) const;
  /// Ball-normalized distance used for nearest-approach reporting:
  /// component_member(i, y) iff this value < ball_radius.
  double component_distance(int block, const Vec& y) const;

  Complex lambda() const { return lambda_; }
  int power() const { return power_; }
  const Mat& forward() const { return forward_; }  // (lambda - Delta)^n

 private:
  Complex lambda_;
  int power_ = 1;
  double radius_ = 1.0;
  Mat forward_;
  Vec ball_center_;
  Vec mapped_center_;                // (lambda-Delta)^{-n} ball_center
  std::vector<Mat> block_u_;         // per block, d x d left singular vectors
  std::vector<RealVec> block_sing_;  // per block, singular values
  int block_dim_ = 0;
};

DeltaModeTargets delta_mode_targets(const TargetSpec& target, const BlockOperatorMatrix& delta);

/// Candidate vector from the sampled eigenfield span: a normalized linear
/// combination of basis columns, either with given weights or with a
/// seeded complex-Gaussian draw (bit-reproducible).
Vec synthesize_candidate(const SubspaceBasis& basis, const std::vector<Complex>& weights);
Vec synthesize_candidate(const SubspaceBasis& basis, std::uint64_t seed);

enum class HarnessMode { Definition11, Definition21 };

struct HarnessReport {
  HarnessMode mode = HarnessMode::Definition11;
  DensityEstimate density;
  std::map<int, double> nearest_approach;  // per component of W
  double horizon = 0.0;
  std::string disclaimer;
};

/// Recurrence harness: composes the visit set (plain targets or
/// resolvent-mapped targets) with the continuous density estimator.
///
/// No finite-dimensional operator is hypercyclic, so the estimate is a
/// recurrence surrogate, never a frequent-hypercyclicity certificate; the
/// report says so explicitly.
HarnessReport fh_harness(const Trajectory& traj, const std::vector<OperatorHandle>& ops,
                         const TargetSpec& target, HarnessMode mode);

}  // namespace hclab
