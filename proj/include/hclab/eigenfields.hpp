#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hclab/polyspec.hpp"
#include "hclab/reduction.hpp"
#include "hclab/types.hpp"

namespace hclab {

/// Parameterized eigenvector field t -> f(t) with A f(t) = g(it) f(t) on
/// the interval [lo, hi], up to the declared backend tolerance. Twice
/// continuous differentiability is an analytic hypothesis; it is carried
/// as metadata, not checked.
struct EigenField {
  double lo = 0.0;
  double hi = 0.0;
  std::function<Vec(double)> evaluate;
  SymbolCurve symbol;
  double declared_tolerance = 1e-12;
  std::string smoothness_note = "assumed twice continuously differentiable";

  bool contains(double t) const { return t >= lo && t <= hi; }
};

enum class LiftKind { Theorem21, Theorem22 };

/// n-block lift F(t) of a scalar eigenfield. The plain lift stacks
/// (it)^{s-1} f(t); the operator-weighted lift stacks
///   F_s(t) = sum_{l=0}^{s-2} (it)^l A_{n-s+1+l} f(t) + (it)^{s-1} f(t),
/// which is exactly Psi applied to the plain lift.
struct CompanionEigenField {
  EigenField base;
  int order = 1;
  LiftKind kind = LiftKind::Theorem21;
  std::vector<OperatorHandle> ops;  // A_0..A_{n-1}; only A_1.. enter the lift

  Vec evaluate(double t) const;
  int block_dim() const;
};

CompanionEigenField lift_theorem21(EigenField base, int order);
CompanionEigenField lift_theorem22(EigenField base, int order, std::vector<OperatorHandle> ops);

/// max over ts of ||M F(t) - it F(t)|| / ||F(t)||.
double eigen_residual(const BlockOperatorMatrix& m, const CompanionEigenField& field,
                      std::span<const double> ts);

/// Finite-sample stand-in for the closed span of eigenfield values:
/// orthonormal columns for the stacked space plus per-block column spans
/// for the projections pi_i.
struct SubspaceBasis {
  int order = 1;
  int block_dim = 0;
  Mat columns;                    // (n d) x rank, orthonormal
  std::vector<Mat> block_columns; // per block, d x block-rank, orthonormal
  std::vector<double> sample_times;

  int rank() const { return static_cast<int>(columns.cols()); }
};

/// Orthonormalize the sample matrix [F_j(t_k)] by SVD; singular values
/// below 1e-10 of the largest are discarded.
SubspaceBasis build_subspace(const std::vector<CompanionEigenField>& fields,
                             const std::vector<std::vector<double>>& sample_times);

/// ||x - P x|| / ||x|| for the stacked subspace.
double subspace_residual(const Vec& x, const SubspaceBasis& basis);

/// Same for one block projection pi_i (0-indexed block).
double block_subspace_residual(const Vec& x_block, const SubspaceBasis& basis, int block);

/// Residual of a d-vector against an explicit orthonormal column span.
double span_residual(const Vec& x, const Mat& orthonormal_columns);

}  // namespace hclab
