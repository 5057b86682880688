#include "hclab/serialize.hpp"

#include <cstdio>
#include <ostream>

namespace hclab {

namespace {

Json complex_pair(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Complex pair_to_complex(const Json& j) {
  require(j.is_array() && j.size() == 2, ErrorCode::ConfigInvalid,
          "expected a [re, im] pair");
  return Complex(j[0].get<double>(), j[1].get<double>());
}

Json matrix_to_json(const Mat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_pair(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from_json(const Json& j) {
  const int rows = static_cast<int>(j.size());
  require(rows > 0, ErrorCode::ConfigInvalid, "empty matrix");
  const int cols = static_cast<int>(j[0].size());
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    require(static_cast<int>(j[i].size()) == cols, ErrorCode::ConfigInvalid, "ragged matrix");
    for (int k = 0; k < cols; ++k) m(i, k) = pair_to_complex(j[i][k]);
  }
  return m;
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Json poly_to_json(const ComplexPoly& p) {
  Json j = Json::array();
  for (const auto& c : p.coeffs()) j.push_back(complex_pair(c));
  return j;
}

ComplexPoly poly_from_json(const Json& j) {
  require(j.is_array(), ErrorCode::ConfigInvalid, "polynomial must be an array");
  std::vector<Complex> coeffs;
  coeffs.reserve(j.size());
  for (const auto& item : j) coeffs.push_back(pair_to_complex(item));
  return ComplexPoly(std::move(coeffs));
}

Json block_matrix_to_json(const BlockOperatorMatrix& m) {
  Json blocks = Json::array();
  for (int i = 0; i < m.order; ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.order; ++j) row.push_back(matrix_to_json(m.block(i, j)));
    blocks.push_back(std::move(row));
  }
  return Json{{"n", m.order}, {"d", m.block_dim}, {"form", block_form_name(m.form)},
              {"blocks", std::move(blocks)}};
}

BlockOperatorMatrix block_matrix_from_json(const Json& j) {
  BlockOperatorMatrix m;
  m.order = j.at("n").get<int>();
  m.block_dim = j.at("d").get<int>();
  const std::string form = j.at("form").get<std::string>();
  if (form == "COMPANION") {
    m.form = BlockForm::Companion;
  } else if (form == "DELTA") {
    m.form = BlockForm::Delta;
  } else if (form == "PSI") {
    m.form = BlockForm::Psi;
  } else {
    fail(ErrorCode::ConfigInvalid, "unknown block form '" + form + "'");
  }
  const auto& blocks = j.at("blocks");
  require(static_cast<int>(blocks.size()) == m.order, ErrorCode::ConfigInvalid,
          "wrong block row count");
  m.blocks.reserve(static_cast<std::size_t>(m.order) * m.order);
  for (int i = 0; i < m.order; ++i) {
    require(static_cast<int>(blocks[i].size()) == m.order, ErrorCode::ConfigInvalid,
            "wrong block column count");
    for (int k = 0; k < m.order; ++k) {
      Mat b = matrix_from_json(blocks[i][k]);
      require(b.rows() == m.block_dim && b.cols() == m.block_dim, ErrorCode::ConfigInvalid,
              "block dimension mismatch");
      m.blocks.push_back(std::move(b));
    }
  }
  return m;
}

Json basis_to_json(const SubspaceBasis& basis) {
  Json cols = Json::array();
  for (int k = 0; k < basis.rank(); ++k) {
    Json col = Json::array();
    for (int i = 0; i < basis.columns.rows(); ++i) col.push_back(complex_pair(basis.columns(i, k)));
    cols.push_back(std::move(col));
  }
  return Json{{"nd", basis.columns.rows()}, {"rank", basis.rank()}, {"columns", std::move(cols)}};
}

void write_eigenfunction_csv(std::ostream& os, const RealVec& x, const Vec& f) {
  require(x.size() == f.size(), ErrorCode::DimMismatch, "grid/vector size mismatch");
  os << "x,re,im\n";
  for (int j = 0; j < x.size(); ++j) {
    os << format_double(x[j]) << ',' << format_double(f[j].real()) << ','
       << format_double(f[j].imag()) << '\n';
  }
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << "t";
  for (int c = 0; c < traj.states.rows(); ++c) os << ",re" << c << ",im" << c;
  os << '\n';
  for (int k = 0; k < traj.num_times(); ++k) {
    os << format_double(traj.times[k]);
    for (int c = 0; c < traj.states.rows(); ++c) {
      os << ',' << format_double(traj.states(c, k).real()) << ','
         << format_double(traj.states(c, k).imag());
    }
    os << '\n';
  }
}

Json trajectory_meta(const Trajectory& traj) {
  return Json{{"form", block_form_name(traj.provenance)},
              {"n", traj.order},
              {"d", traj.block_dim},
              {"dt", traj.dt},
              {"t_max", traj.times.size() ? traj.times[traj.times.size() - 1] : 0.0}};
}

void write_density_csv(std::ostream& os, const DensityEstimate& est) {
  os << "t,ratio\n";
  for (const auto& [t, ratio] : est.running) {
    os << format_double(t) << ',' << format_double(ratio) << '\n';
  }
}

Json density_to_json(const DensityEstimate& est) {
  return Json{{"proxy", est.liminf_proxy}, {"burnIn", est.burn_in}, {"horizon", est.horizon}};
}

Json harness_report_to_json(const HarnessReport& rep, const TargetSpec& target,
                            std::uint64_t seed) {
  Json near = Json::object();
  for (const auto& [i, v] : rep.nearest_approach) near[std::to_string(i)] = v;
  Json tgt = Json::object();
  {
    Json w = Json::array();
    for (int i : target.components) w.push_back(i);
    tgt["W"] = std::move(w);
    if (target.delta_mode) {
      tgt["mode"] = "resolvent-ball";
      tgt["lambda"] = complex_pair(target.delta_mode->lambda);
      tgt["power"] = target.delta_mode->power;
      tgt["radius"] = target.delta_mode->ball_radius;
    } else {
      Json radii = Json::object();
      for (const auto& [i, ct] : target.targets) radii[std::to_string(i)] = ct.radius;
      tgt["mode"] = "metric-balls";
      tgt["radii"] = std::move(radii);
    }
  }
  return Json{{"target", std::move(tgt)},
              {"mode", rep.mode == HarnessMode::Definition11 ? "DEF11" : "DEF21"},
              {"densityProxy", rep.density.liminf_proxy},
              {"nearestApproach", std::move(near)},
              {"horizon", rep.horizon},
              {"seed", seed},
              {"disclaimer", rep.disclaimer}};
}

}  // namespace hclab
