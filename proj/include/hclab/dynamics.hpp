#pragma once

#include <span>
#include <vector>

#include "hclab/matrix_exponential.hpp"
#include "hclab/reduction.hpp"
#include "hclab/types.hpp"

namespace hclab {

/// Fixed-step exact-exponential evolution: one precomputed step matrix
/// e^{dt M}, applied repeatedly. The systems are linear autonomous, so
/// there is no integrator order to tune; accuracy is the exponential's.
struct EvolutionConfig {
  double t_max = 1.0;
  double dt = 1e-2;

  EvolutionConfig(double t_max_, double dt_);
  long steps() const;
};

struct Trajectory {
  RealVec times;
  Mat states;  // (n d) x (steps + 1), one column per time
  BlockForm provenance = BlockForm::Companion;
  int order = 1;
  int block_dim = 0;
  double dt = 0.0;

  int num_times() const { return static_cast<int>(times.size()); }
};

Trajectory evolve(const BlockOperatorMatrix& m, const Vec& x0, const EvolutionConfig& cfg);
/// Order-1 convenience overload: U' = M U for a plain operator.
Trajectory evolve(const OperatorHandle& m, const Vec& x0, const EvolutionConfig& cfg);

/// Recovered derivative components u(t), u'(t), ..., u^{(n-1)}(t).
struct DerivativeSeries {
  RealVec times;
  std::vector<Mat> components;  // components[i] is d x num_times
  double dt = 0.0;

  int order() const { return static_cast<int>(components.size()); }
  int block_dim() const { return components.empty() ? 0 : static_cast<int>(components[0].rows()); }
  int num_times() const { return static_cast<int>(times.size()); }
  Vec component_at(int i, int k) const { return components[i].col(k); }
};

/// COMPANION states are the derivatives directly; DELTA states are mapped
/// back through Psi^{-1} column by column.
DerivativeSeries extract_derivatives(const Trajectory& traj, const std::vector<OperatorHandle>& ops);

/// max over interior times of
///   || u^(n)(t) + sum_i A_i u^(i)(t) || / max(1, ||u(t)||),
/// with u^(n) reconstructed by centered differencing of u^(n-1).
double acp_residual(const DerivativeSeries& derivs, const std::vector<OperatorHandle>& ops);

enum class RegularizerKind { SpectralGaussian, ResolventPower };

/// An (A, C) pair with C injective and commuting with A.
struct RegularizedPair {
  OperatorHandle a;
  OperatorHandle c;
  double commutator_residual = 0.0;   // ||AC - CA||_F / (||A||_F ||C||_F)
  double smallest_singular_value = 0.0;  // of C
};

/// C = e^{-|z|^2}(A) by spectral calculus (requires a well-conditioned
/// eigenbasis), or C = (lambda0 - A)^{-power}.
RegularizedPair build_regularizer(const OperatorHandle& a, RegularizerKind kind,
                                  Complex lambda0 = Complex(0.0, 0.0), int power = 1);

/// Residuals of the regularized-semigroup axioms for T(t) = e^{tA} C:
/// commutation with A, commutation with C, the integral identity
/// A int_0^t T(s) ds = T(t) - C (adaptive quadrature to 1e-10), and the
/// composition law T(t) T(s) = T(t+s) C over all sample pairs.
struct CRegularizedReport {
  double commute_with_a = 0.0;
  double commute_with_c = 0.0;
  double integral_identity = 0.0;
  double composition_law = 0.0;

  double worst() const;
};

CRegularizedReport cregularized_check(const RegularizedPair& pair, std::span<const double> ts);

}  // namespace hclab
