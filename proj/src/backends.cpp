#include "hclab/backends.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace hclab {

namespace {

// 8-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 8> kGaussNodes = {
    -0.9602898564975362, -0.7966664774136267, -0.5255324099163290, -0.1834346424956498,
    0.1834346424956498,  0.5255324099163290,  0.7966664774136267,  0.9602898564975362};
constexpr std::array<double, 8> kGaussWeights = {
    0.1012285362903763, 0.2223810344533745, 0.3137066458778873, 0.3626837833783620,
    0.3626837833783620, 0.3137066458778873, 0.2223810344533745, 0.1012285362903763};

}  // namespace

RealVec GridSpec::nodes() const {
  RealVec x(points);
  const double h = spacing();
  for (int j = 0; j < points; ++j) x[j] = -half_width + h * j;
  return x;
}

OUParams::OUParams(double b_, double c_) : b(b_), c(c_) {
  require(b > 0.0 && c > b / 2.0, ErrorCode::ConfigInvalid,
          "OU parameters must satisfy c > b/2 > 0");
}

OperatorHandle diag_model(const std::vector<Complex>& mu) {
  const int d = static_cast<int>(mu.size());
  Mat m = Mat::Zero(d, d);
  for (int i = 0; i < d; ++i) m(i, i) = mu[i];
  return OperatorHandle(std::move(m), "diag");
}

OperatorHandle ou_matrix(const OUParams& params, const GridSpec& grid) {
  require(grid.boundary == Boundary::Decaying, ErrorCode::ConfigInvalid,
          "the OU discretization expects a decaying grid");
  const int N = grid.points;
  require(N >= 8, ErrorCode::GridTooCoarse, "OU grid needs at least 8 points");
  const double h = grid.spacing();
  const RealVec x = grid.nodes();
  Mat A = Mat::Zero(N, N);
  const double ih2 = 1.0 / (h * h);
  const double i2h = 1.0 / (2.0 * h);
  for (int j = 0; j < N; ++j) {
    const double bx = params.b * x[j];
    if (j == 0) {
      A(0, 0) += 2.0 * ih2;
      A(0, 1) += -5.0 * ih2;
      A(0, 2) += 4.0 * ih2;
      A(0, 3) += -1.0 * ih2;
      A(0, 0) += bx * -3.0 * i2h;
      A(0, 1) += bx * 4.0 * i2h;
      A(0, 2) += bx * -1.0 * i2h;
    } else if (j == N - 1) {
      A(j, j - 3) += -1.0 * ih2;
      A(j, j - 2) += 4.0 * ih2;
      A(j, j - 1) += -5.0 * ih2;
      A(j, j) += 2.0 * ih2;
      A(j, j - 2) += bx * 1.0 * i2h;
      A(j, j - 1) += bx * -4.0 * i2h;
      A(j, j) += bx * 3.0 * i2h;
    } else {
      A(j, j - 1) += ih2;
      A(j, j) += -2.0 * ih2;
      A(j, j + 1) += ih2;
      A(j, j - 1) += -bx * i2h;
      A(j, j + 1) += bx * i2h;
    }
    A(j, j) += params.c;
  }
  return OperatorHandle(std::move(A), "OU(b=" + std::to_string(params.b) +
                                          ",c=" + std::to_string(params.c) + ")");
}

Vec ou_eigenfunction(Complex lambda, int branch, const OUParams& params, const GridSpec& grid) {
  require(branch == 1 || branch == 2, ErrorCode::ConfigInvalid, "branch must be 1 or 2");
  require(lambda.real() < params.omega_bound(), ErrorCode::OutOfOmega,
          "Re lambda must stay below c - b/2");
  require(grid.points >= 8, ErrorCode::GridTooCoarse, "grid needs at least 8 points");

  const int N = grid.points;
  const double L = grid.half_width;
  const double b = params.b;
  const double dxi = M_PI / L;
  const RealVec x = grid.nodes();

  // Both branches share the |xi| exponent w; branch 1 carries sign(xi).
  const Complex w = -(1.0 + (lambda - params.c) / b);
  const bool odd = (branch == 1);
  auto profile = [&](double xi) -> Complex {
    const double a = std::abs(xi);
    Complex p = std::exp(-xi * xi / (2.0 * b)) * std::exp(w * std::log(a));
    if (odd && xi < 0.0) p = -p;
    return p;
  };

  Vec f = Vec::Zero(N);

  // Dual-grid lattice sum, xi = 0 bin zeroed.
  std::vector<Complex> g(N);
  for (int k = 0; k < N; ++k) {
    const int m = k - N / 2;
    g[k] = (m == 0) ? Complex(0.0, 0.0) : profile(m * dxi);
  }
  const double lattice_scale = dxi / (2.0 * M_PI);
  for (int j = 0; j < N; ++j) {
    Complex acc(0.0, 0.0);
    for (int k = 0; k < N; ++k) {
      const int m = k - N / 2;
      if (m == 0) continue;
      acc += g[k] * std::polar(1.0, x[j] * m * dxi);
    }
    f[j] = acc * lattice_scale;
  }

  // Origin window: remove the lattice cells |m| <= mwin and integrate the
  // window [-R, R] with Gauss panels in u = log xi instead.
  const int mwin = std::min(N / 2 - 1,
                            std::max(static_cast<int>(std::ceil(16.0 + 10.0 * std::abs(w.imag()))),
                                     static_cast<int>(std::ceil(5.0 * std::sqrt(b) / dxi))));
  const double R = (mwin + 0.5) * dxi;
  for (int j = 0; j < N; ++j) {
    Complex acc(0.0, 0.0);
    for (int m = -mwin; m <= mwin; ++m) {
      if (m == 0) continue;
      acc += profile(m * dxi) * std::polar(1.0, x[j] * m * dxi);
    }
    f[j] -= acc * lattice_scale;
  }

  const double window_depth = std::min(80.0, 38.0 / (w.real() + 1.0));
  const double panel_du = 4.0 / (1.0 + std::abs(w.imag()) + L * R);
  const int panels = static_cast<int>(std::ceil(window_depth / panel_du));
  const double u_hi = std::log(R);
  const double u_lo = u_hi - window_depth;
  const double du = (u_hi - u_lo) / panels;

  std::vector<double> q_xi;
  std::vector<Complex> q_base;  // weight * xi * profile(xi) at positive nodes
  q_xi.reserve(static_cast<std::size_t>(panels) * kGaussNodes.size());
  q_base.reserve(q_xi.capacity());
  for (int p = 0; p < panels; ++p) {
    const double a0 = u_lo + p * du;
    for (std::size_t q = 0; q < kGaussNodes.size(); ++q) {
      const double u = a0 + 0.5 * du * (kGaussNodes[q] + 1.0);
      const double xi = std::exp(u);
      q_xi.push_back(xi);
      q_base.push_back(0.5 * du * kGaussWeights[q] * xi * profile(xi));
    }
  }
  const double panel_scale = 1.0 / (2.0 * M_PI);
  for (int j = 0; j < N; ++j) {
    Complex acc(0.0, 0.0);
    for (std::size_t q = 0; q < q_xi.size(); ++q) {
      const Complex phase = std::polar(1.0, x[j] * q_xi[q]);
      // negative side shares |profile| up to the branch-1 sign
      const Complex neg = odd ? -q_base[q] : q_base[q];
      acc += q_base[q] * phase + neg * std::conj(phase);
    }
    f[j] += acc * panel_scale;
  }

  const double nrm = f.norm();
  require(nrm > 0.0 && std::isfinite(nrm), ErrorCode::NonfiniteState,
          "eigenfunction transform degenerated");
  return f / nrm;
}

OperatorHandle derivative_matrix(const GridSpec& grid) {
  require(grid.boundary == Boundary::Periodic, ErrorCode::ConfigInvalid,
          "spectral differentiation expects a periodic grid");
  const int N = grid.points;
  require(N >= 2, ErrorCode::GridTooCoarse, "grid needs at least 2 points");
  const double L = grid.half_width;
  const RealVec s = grid.nodes();
  // D = E diag(i kappa) E^* / N with kappa_m = pi m / L, m = -N/2 .. N/2-1;
  // Nyquist multiplier zeroed.
  Mat E(N, N);
  Mat Ek(N, N);
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      const int m = k - N / 2;
      const double kappa = M_PI * m / L;
      const Complex e = std::polar(1.0, s[j] * kappa);
      E(j, k) = e;
      Ek(j, k) = (m == -N / 2) ? Complex(0.0, 0.0) : Complex(0.0, kappa) * e;
    }
  }
  Mat D = (Ek * E.adjoint()) / static_cast<double>(N);
  return OperatorHandle(std::move(D), "d/ds");
}

WeightCheckResult admissible_weight_check(const WeightSpec& w, const GridSpec& grid) {
  const int N = grid.points;
  require(static_cast<int>(w.rho.size()) == N, ErrorCode::DimMismatch,
          "weight sample count must match the grid");
  require((w.rho.array() > 0.0).all(), ErrorCode::ConfigInvalid,
          "weight samples must be strictly positive");
  require(w.growth_constant >= 1.0, ErrorCode::ConfigInvalid, "M must be >= 1");
  const RealVec t = grid.nodes();
  WeightCheckResult res;
  res.worst_ratio = 0.0;
  for (int j = 0; j < N; ++j) {
    for (int k = 0; k < N; ++k) {
      const double shift = t[k] - t[j];
      const double bound = w.growth_constant * std::exp(w.growth_rate * std::abs(shift)) * w.rho[k];
      const double ratio = w.rho[j] / bound;
      if (ratio > res.worst_ratio) {
        res.worst_ratio = ratio;
        res.worst_t = t[j];
        res.worst_shift = shift;
      }
    }
  }
  res.admissible = res.worst_ratio <= 1.0 + 1e-9;
  return res;
}

}  // namespace hclab
