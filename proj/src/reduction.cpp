#include "hclab/reduction.hpp"

#include <utility>

namespace hclab {

namespace {

void check_ops(const std::vector<OperatorHandle>& ops) {
  require(!ops.empty(), ErrorCode::DimMismatch, "operator list is empty");
  const int d = ops[0].dim();
  for (const auto& op : ops) {
    require(op.dim() == d, ErrorCode::DimMismatch,
            "operator '" + op.label + "' has dimension " + std::to_string(op.dim()) +
                ", expected " + std::to_string(d));
  }
}

BlockOperatorMatrix empty_form(int n, int d, BlockForm form) {
  BlockOperatorMatrix m;
  m.order = n;
  m.block_dim = d;
  m.form = form;
  m.blocks.assign(static_cast<std::size_t>(n) * n, Mat::Zero(d, d));
  return m;
}

}  // namespace

OperatorHandle::OperatorHandle(Mat m, std::string lbl) : entries(std::move(m)), label(std::move(lbl)) {
  require(entries.rows() == entries.cols(), ErrorCode::DimMismatch,
          "operator matrix must be square");
  require(entries.allFinite(), ErrorCode::NonfiniteState,
          "operator matrix has non-finite entries");
}

OperatorHandle OperatorHandle::identity(int d, std::string lbl) {
  return OperatorHandle(Mat::Identity(d, d), std::move(lbl));
}

OperatorHandle OperatorHandle::zero(int d, std::string lbl) {
  return OperatorHandle(Mat::Zero(d, d), std::move(lbl));
}

const char* block_form_name(BlockForm f) {
  switch (f) {
    case BlockForm::Companion: return "COMPANION";
    case BlockForm::Delta: return "DELTA";
    case BlockForm::Psi: return "PSI";
  }
  return "?";
}

Mat BlockOperatorMatrix::flatten() const {
  Mat out(dim(), dim());
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      out.block(i * block_dim, j * block_dim, block_dim, block_dim) = block(i, j);
    }
  }
  return out;
}

Vec BlockOperatorMatrix::apply(const Vec& x) const {
  require(x.size() == dim(), ErrorCode::DimMismatch, "stacked vector has wrong size");
  Vec out = Vec::Zero(dim());
  for (int i = 0; i < order; ++i) {
    for (int j = 0; j < order; ++j) {
      out.segment(i * block_dim, block_dim).noalias() +=
          block(i, j) * x.segment(j * block_dim, block_dim);
    }
  }
  return out;
}

Vec InitialData::stacked() const {
  const int n = order();
  const int d = block_dim();
  Vec out(n * d);
  for (int i = 0; i < n; ++i) {
    require(components[i].size() == d, ErrorCode::DimMismatch,
            "initial data components have mixed dimensions");
    out.segment(i * d, d) = components[i];
  }
  return out;
}

BlockOperatorMatrix build_companion(const std::vector<OperatorHandle>& ops) {
  check_ops(ops);
  const int n = static_cast<int>(ops.size());
  const int d = ops[0].dim();
  auto m = empty_form(n, d, BlockForm::Companion);
  for (int i = 0; i + 1 < n; ++i) m.block(i, i + 1) = Mat::Identity(d, d);
  for (int j = 0; j < n; ++j) m.block(n - 1, j) = -ops[j].entries;
  return m;
}

BlockOperatorMatrix build_delta(const std::vector<OperatorHandle>& ops) {
  check_ops(ops);
  const int n = static_cast<int>(ops.size());
  const int d = ops[0].dim();
  auto m = empty_form(n, d, BlockForm::Delta);
  for (int i = 0; i < n; ++i) m.block(i, 0) = -ops[n - 1 - i].entries;
  for (int i = 0; i + 1 < n; ++i) m.block(i, i + 1) = Mat::Identity(d, d);
  return m;
}

BlockOperatorMatrix build_psi(const std::vector<OperatorHandle>& ops) {
  check_ops(ops);
  const int n = static_cast<int>(ops.size());
  const int d = ops[0].dim();
  auto m = empty_form(n, d, BlockForm::Psi);
  for (int i = 0; i < n; ++i) {
    m.block(i, i) = Mat::Identity(d, d);
    for (int j = 1; j <= i; ++j) m.block(i, i - j) = ops[n - j].entries;
  }
  return m;
}

Vec psi_apply_inverse(const BlockOperatorMatrix& psi, const Vec& v) {
  require(psi.form == BlockForm::Psi, ErrorCode::UnknownForm,
          "psi_apply_inverse expects a PSI-form matrix");
  require(v.size() == psi.dim(), ErrorCode::DimMismatch, "stacked vector has wrong size");
  const int n = psi.order;
  const int d = psi.block_dim;
  Vec y(v.size());
  for (int i = 0; i < n; ++i) {
    Vec acc = v.segment(i * d, d);
    for (int j = 0; j < i; ++j) {
      acc.noalias() -= psi.block(i, j) * y.segment(j * d, d);
    }
    y.segment(i * d, d) = acc;
  }
  return y;
}

Vec derivatives_to_delta_state(const std::vector<OperatorHandle>& ops, const InitialData& init) {
  check_ops(ops);
  const int n = static_cast<int>(ops.size());
  require(init.order() == n, ErrorCode::DimMismatch,
          "initial data must provide one component per derivative order");
  require(init.block_dim() == ops[0].dim(), ErrorCode::DimMismatch,
          "initial data dimension does not match the operators");
  return build_psi(ops).apply(init.stacked());
}

Mat poly_apply(const ComplexPoly& p, const Mat& a) {
  const int d = static_cast<int>(a.rows());
  if (p.is_zero()) return Mat::Zero(d, d);
  const auto& c = p.coeffs();
  Mat acc = c.back() * Mat::Identity(d, d);
  for (int k = static_cast<int>(c.size()) - 2; k >= 0; --k) {
    acc = (acc * a).eval();
    acc += c[k] * Mat::Identity(d, d);
  }
  return acc;
}

std::vector<OperatorHandle> operators_from_polynomials(const std::vector<ComplexPoly>& polys,
                                                       const OperatorHandle& a) {
  std::vector<OperatorHandle> out;
  out.reserve(polys.size());
  for (std::size_t l = 0; l < polys.size(); ++l) {
    out.emplace_back(poly_apply(polys[l], a.entries), "P_" + std::to_string(l) + "(" + a.label + ")");
  }
  return out;
}

}  // namespace hclab
