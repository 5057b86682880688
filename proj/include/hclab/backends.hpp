#pragma once

#include <vector>

#include "hclab/reduction.hpp"
#include "hclab/types.hpp"

namespace hclab {

enum class Boundary { Periodic, Decaying };

/// Uniform grid on [-L, L) with N nodes and spacing h = 2L/N.
struct GridSpec {
  double half_width = 1.0;
  int points = 8;
  Boundary boundary = Boundary::Periodic;

  double spacing() const { return 2.0 * half_width / points; }
  RealVec nodes() const;
};

/// Drift/zeroth-order coefficients of A_c u = u'' + b x u' + c u, with the
/// eigenvalue half-plane Omega = { Re lambda < c - b/2 }.
struct OUParams {
  double b = 1.0;
  double c = 2.0;

  OUParams(double b_, double c_);
  double omega_bound() const { return c - b / 2.0; }
};

/// Positive weight samples on the grid plus the claimed admissibility
/// constants M >= 1, omega.
struct WeightSpec {
  RealVec rho;
  double growth_constant = 1.0;  // M
  double growth_rate = 0.0;      // omega
};

/// Diagonal test operator with prescribed spectrum.
OperatorHandle diag_model(const std::vector<Complex>& mu);

/// Second-order finite-difference discretization of A_c on a decaying grid:
/// central stencils inside, one-sided second-order stencils on the two edge
/// rows (solutions are assumed negligible at |x| = L, so no ghost nodes).
OperatorHandle ou_matrix(const OUParams& params, const GridSpec& grid);

/// Eigenfunction of A_c for lambda in Omega, branch 1 (odd) or 2 (even):
/// the inverse Fourier transform of
///   branch 1:  exp(-xi^2/2b) xi  |xi|^(-(2+(lambda-c)/b))
///   branch 2:  exp(-xi^2/2b)     |xi|^(-(1+(lambda-c)/b))
/// evaluated on the grid and normalized to unit Euclidean norm.
///
/// The transform is the dual-grid lattice sum with the xi = 0 bin zeroed,
/// plus a window correction around the origin: the profile's phase turns at
/// a rate ~ |Im lambda| / |xi| there, which no fixed lattice resolves, so
/// the cells nearest zero are re-integrated with Gauss panels in log xi
/// (where that phase is linear). The correction is what keeps the residual
/// against ou_matrix at the finite-difference floor.
Vec ou_eigenfunction(Complex lambda, int branch, const OUParams& params, const GridSpec& grid);

/// Spectral differentiation matrix on a periodic grid: exact (to roundoff)
/// on grid-resolved complex exponentials; the Nyquist mode derivative is
/// set to zero.
OperatorHandle derivative_matrix(const GridSpec& grid);

struct WeightCheckResult {
  bool admissible = false;
  double worst_ratio = 0.0;  // max over pairs of rho(t) / (M e^{omega |t'|} rho(t+t'))
  double worst_t = 0.0;
  double worst_shift = 0.0;  // t'
};

/// Exhaustive check of rho(t) <= M e^{omega |t'|} rho(t + t') over all grid
/// pairs (t, t + t'); both points run over stored nodes, so every offset
/// t' = t_k - t_j is covered on periodic and decaying grids alike.
WeightCheckResult admissible_weight_check(const WeightSpec& w, const GridSpec& grid);

}  // namespace hclab
