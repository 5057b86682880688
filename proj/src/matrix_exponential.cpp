#include "hclab/matrix_exponential.hpp"

#include <cmath>
#include <span>

#include <Eigen/LU>

namespace hclab {

namespace {

// Backward-error thresholds theta_m for the 1-norm (Higham 2005).
constexpr double kTheta3 = 1.495585217958292e-2;
constexpr double kTheta5 = 2.539398330063230e-1;
constexpr double kTheta7 = 9.504178996162932e-1;
constexpr double kTheta9 = 2.097847961257068;
constexpr double kTheta13 = 5.371920351148152;

double norm1(const Mat& a) { return a.cwiseAbs().colwise().sum().maxCoeff(); }

Mat pade_solve(const Mat& u, const Mat& v) {
  // (V - U) X = (V + U)
  return Eigen::PartialPivLU<Mat>(v - u).solve(v + u);
}

Mat pade_low(const Mat& a, std::span<const double> b) {
  const int m = static_cast<int>(b.size()) - 1;
  const int d = static_cast<int>(a.rows());
  const Mat id = Mat::Identity(d, d);
  const Mat a2 = a * a;
  Mat us = b[1] * id;
  Mat v = b[0] * id;
  Mat pw = Mat::Identity(d, d);
  for (int k = 2; k <= m; k += 2) {
    pw = (pw * a2).eval();
    us += b[k + 1] * pw;
    v += b[k] * pw;
  }
  const Mat u = a * us;
  return pade_solve(u, v);
}

Mat pade13(const Mat& a) {
  static const double b[14] = {
      64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
      129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
      1323241920.0,        40840800.0,          960960.0,           16380.0,
      182.0,               1.0};
  const int d = static_cast<int>(a.rows());
  const Mat id = Mat::Identity(d, d);
  const Mat a2 = a * a;
  const Mat a4 = a2 * a2;
  const Mat a6 = a2 * a4;
  const Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                     b[3] * a2 + b[1] * id);
  const Mat v =
      a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * id;
  return pade_solve(u, v);
}

}  // namespace

Mat matrix_exponential(const Mat& a) {
  require(a.rows() == a.cols(), ErrorCode::DimMismatch, "matrix must be square");
  require(a.allFinite(), ErrorCode::NonfiniteState, "matrix has non-finite entries");
  const double nrm = norm1(a);
  static const double b3[] = {120.0, 60.0, 12.0, 1.0};
  static const double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static const double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0};
  static const double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
                              2162160.0,     110880.0,     3960.0,       90.0,        1.0};
  if (nrm <= kTheta3) return pade_low(a, b3);
  if (nrm <= kTheta5) return pade_low(a, b5);
  if (nrm <= kTheta7) return pade_low(a, b7);
  if (nrm <= kTheta9) return pade_low(a, b9);
  int squarings = static_cast<int>(std::ceil(std::log2(nrm / kTheta13)));
  squarings = std::max(squarings, 0);
  const double scale = std::ldexp(1.0, -squarings);
  Mat x = pade13(a * scale);
  for (int k = 0; k < squarings; ++k) x = (x * x).eval();
  return x;
}

}  // namespace hclab
