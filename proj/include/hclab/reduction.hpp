#pragma once

#include <string>
#include <vector>

#include "hclab/polyspec.hpp"
#include "hclab/types.hpp"

namespace hclab {

/// Finite-dimensional stand-in for a closed operator: a square complex
/// matrix with a label for reports.
struct OperatorHandle {
  Mat entries;
  std::string label;

  OperatorHandle() = default;
  OperatorHandle(Mat m, std::string lbl = "");

  int dim() const { return static_cast<int>(entries.rows()); }

  static OperatorHandle identity(int d, std::string lbl = "I");
  static OperatorHandle zero(int d, std::string lbl = "0");
};

enum class BlockForm { Companion, Delta, Psi };

const char* block_form_name(BlockForm f);

/// n x n block matrix over d x d operator blocks. Zero and identity blocks
/// are stored explicitly; desk-scale sizes keep that affordable.
struct BlockOperatorMatrix {
  int order = 0;      // n
  int block_dim = 0;  // d
  BlockForm form = BlockForm::Companion;
  std::vector<Mat> blocks;  // row-major, order*order entries

  const Mat& block(int i, int j) const { return blocks[i * order + j]; }
  Mat& block(int i, int j) { return blocks[i * order + j]; }

  int dim() const { return order * block_dim; }

  /// Dense (n d) x (n d) matrix.
  Mat flatten() const;

  /// Blockwise matrix-vector product on a stacked nd-vector.
  Vec apply(const Vec& x) const;
};

/// Initial data (u_0, ..., u_{n-1}), one d-vector per derivative order.
struct InitialData {
  std::vector<Vec> components;

  int order() const { return static_cast<int>(components.size()); }
  int block_dim() const { return components.empty() ? 0 : static_cast<int>(components[0].size()); }
  Vec stacked() const;
};

/// Companion form of the higher-order problem: identity superdiagonal,
/// last block row (-A_0, ..., -A_{n-1}). ops lists A_0, ..., A_{n-1}.
BlockOperatorMatrix build_companion(const std::vector<OperatorHandle>& ops);

/// Neubrander's first-order form: first block column (-A_{n-1}, ..., -A_0)
/// top to bottom, identity superdiagonal.
BlockOperatorMatrix build_delta(const std::vector<OperatorHandle>& ops);

/// Unit lower-triangular change of variables between derivative states and
/// Delta states. Row i carries A_{n-j} at block column i-j (j = 1..i), so
/// (Psi u)_i = u_i + sum_{j=1}^{i} A_{n-j} u_{i-j}.
///
/// The printed operator matrix in the source material carries minus signs
/// on these bands; the plus convention is the one under which Delta F = itF
/// holds for the lifted eigenfields and under which Psi intertwines the
/// companion and Delta dynamics, and it is certified by tests against both
/// identities.
BlockOperatorMatrix build_psi(const std::vector<OperatorHandle>& ops);

/// Solve Psi y = v by blockwise forward substitution.
Vec psi_apply_inverse(const BlockOperatorMatrix& psi, const Vec& v);

/// Forward map x = Psi (u_0, ..., u_{n-1}) from derivative initial data to
/// the Delta-system state.
Vec derivatives_to_delta_state(const std::vector<OperatorHandle>& ops, const InitialData& init);

/// A_l = P_l(A) by matrix Horner evaluation.
std::vector<OperatorHandle> operators_from_polynomials(const std::vector<ComplexPoly>& polys,
                                                       const OperatorHandle& a);
Mat poly_apply(const ComplexPoly& p, const Mat& a);

}  // namespace hclab
