#include "hclab/eigenfields.hpp"

#include <Eigen/SVD>

namespace hclab {

int CompanionEigenField::block_dim() const {
  if (!ops.empty()) return ops[0].dim();
  return static_cast<int>(base.evaluate(base.lo).size());
}

Vec CompanionEigenField::evaluate(double t) const {
  require(base.contains(t) || base.symbol.contains(t), ErrorCode::OutOfDomain,
          "t outside the eigenfield interval");
  const Vec f = base.evaluate(t);
  const int d = static_cast<int>(f.size());
  const int n = order;
  const Complex it(0.0, t);
  Vec out(n * d);
  if (kind == LiftKind::Theorem21) {
    Complex pw(1.0, 0.0);
    for (int s = 0; s < n; ++s) {
      out.segment(s * d, d) = pw * f;
      pw *= it;
    }
    return out;
  }
  require(static_cast<int>(ops.size()) == n, ErrorCode::DimMismatch,
          "operator-weighted lift needs A_0..A_{n-1}");
  for (const auto& op : ops) {
    require(op.dim() == d, ErrorCode::DimMismatch, "operator dimension mismatch with field");
  }
  for (int s = 1; s <= n; ++s) {
    Complex pw(1.0, 0.0);
    Vec blockv = Vec::Zero(d);
    for (int l = 0; l <= s - 2; ++l) {
      const int idx = n - s + 1 + l;
      require(idx >= 1 && idx < n, ErrorCode::IndexOutOfRange,
              "lift requested operator index " + std::to_string(idx));
      blockv.noalias() += pw * (ops[idx].entries * f);
      pw *= it;
    }
    blockv += pw * f;  // pw == (it)^{s-1} here
    out.segment((s - 1) * d, d) = blockv;
  }
  return out;
}

CompanionEigenField lift_theorem21(EigenField base, int order) {
  CompanionEigenField c;
  c.base = std::move(base);
  c.order = order;
  c.kind = LiftKind::Theorem21;
  return c;
}

CompanionEigenField lift_theorem22(EigenField base, int order, std::vector<OperatorHandle> ops) {
  CompanionEigenField c;
  c.base = std::move(base);
  c.order = order;
  c.kind = LiftKind::Theorem22;
  c.ops = std::move(ops);
  require(static_cast<int>(c.ops.size()) == order, ErrorCode::DimMismatch,
          "expected one operator per derivative order");
  return c;
}

double eigen_residual(const BlockOperatorMatrix& m, const CompanionEigenField& field,
                      std::span<const double> ts) {
  require(!ts.empty(), ErrorCode::EmptySamples, "no sample times given");
  require(m.order == field.order, ErrorCode::DimMismatch, "block order mismatch");
  double worst = 0.0;
  for (double t : ts) {
    const Vec F = field.evaluate(t);
    require(F.size() == m.dim(), ErrorCode::DimMismatch, "field/matrix dimension mismatch");
    const Vec r = m.apply(F) - Complex(0.0, t) * F;
    worst = std::max(worst, r.norm() / F.norm());
  }
  return worst;
}

namespace {

Mat orthonormal_columns(const Mat& samples) {
  Eigen::BDCSVD<Mat> svd(samples, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return Mat(samples.rows(), 0);
  const double cutoff = 1e-10 * sv(0);
  int rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

SubspaceBasis build_subspace(const std::vector<CompanionEigenField>& fields,
                             const std::vector<std::vector<double>>& sample_times) {
  require(!fields.empty() && fields.size() == sample_times.size(), ErrorCode::EmptySamples,
          "need one sample-time list per field");
  int total = 0;
  for (const auto& ts : sample_times) total += static_cast<int>(ts.size());
  require(total > 0, ErrorCode::EmptySamples, "need at least one sample");

  const int n = fields[0].order;
  const int d = fields[0].block_dim();
  Mat samples(n * d, total);
  SubspaceBasis basis;
  basis.order = n;
  basis.block_dim = d;
  int col = 0;
  for (std::size_t j = 0; j < fields.size(); ++j) {
    require(fields[j].order == n, ErrorCode::DimMismatch, "fields disagree on the block order");
    for (double t : sample_times[j]) {
      const Vec F = fields[j].evaluate(t);
      require(F.size() == n * d, ErrorCode::DimMismatch, "fields disagree on dimensions");
      samples.col(col++) = F;
      basis.sample_times.push_back(t);
    }
  }
  basis.columns = orthonormal_columns(samples);
  basis.block_columns.reserve(n);
  for (int i = 0; i < n; ++i) {
    basis.block_columns.push_back(orthonormal_columns(samples.middleRows(i * d, d)));
  }
  return basis;
}

double span_residual(const Vec& x, const Mat& q) {
  require(x.size() == q.rows(), ErrorCode::DimMismatch, "vector/basis dimension mismatch");
  const double nrm = x.norm();
  if (nrm == 0.0) return 0.0;
  const Vec proj = q * (q.adjoint() * x);
  return (x - proj).norm() / nrm;
}

double subspace_residual(const Vec& x, const SubspaceBasis& basis) {
  return span_residual(x, basis.columns);
}

double block_subspace_residual(const Vec& x_block, const SubspaceBasis& basis, int block) {
  require(block >= 0 && block < basis.order, ErrorCode::IndexOutOfRange, "block index out of range");
  return span_residual(x_block, basis.block_columns[block]);
}

}  // namespace hclab
