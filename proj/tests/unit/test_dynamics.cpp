#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "hclab/backends.hpp"
#include "hclab/dynamics.hpp"
#include "hclab/rng.hpp"

using namespace hclab;

namespace {

Mat random_matrix(Rng& rng, int d, double scale) {
  Mat m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = scale * rng.cnormal();
  return m;
}

OperatorHandle scalar_op(Complex v) {
  Mat m(1, 1);
  m(0, 0) = v;
  return OperatorHandle(m);
}

}  // namespace

TEST_CASE("matrix exponential on diagonals") {
  Mat a = Mat::Zero(3, 3);
  a(0, 0) = Complex(0.0, 1.0);
  a(1, 1) = Complex(-0.5, 2.0);
  a(2, 2) = Complex(0.3, -0.7);
  const Mat e = matrix_exponential(a);
  for (int i = 0; i < 3; ++i) {
    CHECK(std::abs(e(i, i) - std::exp(a(i, i))) < 1e-14 * std::abs(std::exp(a(i, i))));
  }
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("matrix exponential on a jordan block") {
  // exp(t [[l,1],[0,l]]) = e^{tl} [[1,t],[0,1]]
  const Complex l(0.2, -1.0);
  const double t = 1.7;
  Mat a = Mat::Zero(2, 2);
  a(0, 0) = l;
  a(1, 1) = l;
  a(0, 1) = 1.0;
  const Mat e = matrix_exponential(t * a);
  const Complex etl = std::exp(t * l);
  CHECK(std::abs(e(0, 0) - etl) < 1e-13 * std::abs(etl));
  CHECK(std::abs(e(0, 1) - t * etl) < 1e-13 * std::abs(t * etl));
  CHECK(std::abs(e(1, 0)) < 1e-15);
  CHECK(std::abs(e(1, 1) - etl) < 1e-13 * std::abs(etl));
}

TEST_CASE("matrix exponential inverse identity") {
  Rng rng(2);
  for (int trial = 0; trial < 5; ++trial) {
    const Mat a = random_matrix(rng, 6, 1.0);
    const Mat prod = matrix_exponential(a) * matrix_exponential(-a);
    CHECK((prod - Mat::Identity(6, 6)).norm() < 1e-12);
  }
}

TEST_CASE("matrix exponential agrees with an independent implementation") {
  Rng rng(4);
  for (double scale : {0.3, 2.0, 12.0}) {
    const Mat a = random_matrix(rng, 6, scale);
    const Mat mine = matrix_exponential(a);
    const Mat theirs = a.exp();  // Eigen's unsupported module, independent path
    CHECK((mine - theirs).norm() <= 1e-12 * theirs.norm());
  }
}

TEST_CASE("evolve with zero generator is constant") {
  const auto traj = evolve(OperatorHandle::zero(3), Vec::Constant(3, Complex(1.0, -2.0)),
                           EvolutionConfig(1.0, 0.1));
  for (int k = 0; k < traj.num_times(); ++k) {
    CHECK((traj.states.col(k) - Vec::Constant(3, Complex(1.0, -2.0))).norm() == 0.0);
  }
}

TEST_CASE("evolve closes a rotation period") {
  const auto a = diag_model({Complex(0.0, 1.0)});
  const auto traj = evolve(a, Vec::Constant(1, Complex(1.0, 0.0)),
                           EvolutionConfig(2.0 * M_PI, 2.0 * M_PI / 1000.0));
  const Vec last = traj.states.col(traj.num_times() - 1);
  CHECK(std::abs(last(0) - Complex(1.0, 0.0)) < 1e-10);
}

TEST_CASE("evolve reproduces the closed-form scalar second-order solution") {
  const auto comp = build_companion({scalar_op(2.0), scalar_op(3.0)});
  Vec x0(2);
  x0 << Complex(1.0, 0.0), Complex(0.0, 0.0);
  const auto traj = evolve(comp, x0, EvolutionConfig(5.0, 1e-3));
  for (int k = 0; k < traj.num_times(); k += 100) {
    const double t = traj.times[k];
    const double expect = 2.0 * std::exp(-t) - std::exp(-2.0 * t);
    CHECK(std::abs(traj.states(0, k) - Complex(expect, 0.0)) < 1e-10);
  }
}

TEST_CASE("evolve flags overflow as a non-finite state") {
  try {
    evolve(scalar_op(400.0), Vec::Constant(1, Complex(1.0, 0.0)), EvolutionConfig(10.0, 0.5));
    FAIL("expected NONFINITE_STATE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonfiniteState);
  }
}

TEST_CASE("evolution config guards the step count") {
  CHECK_THROWS_AS(EvolutionConfig(1e6, 1e-3), Error);
  CHECK_THROWS_AS(EvolutionConfig(-1.0, 0.1), Error);
  CHECK_THROWS_AS(EvolutionConfig(1.0, 0.0), Error);
}

TEST_CASE("semigroup step property") {
  const auto a = diag_model({Complex(0.0, 1.0), Complex(0.0, M_SQRT2)});
  Vec x0(2);
  x0 << Complex(0.7, 0.1), Complex(0.0, -1.0);
  const auto traj = evolve(a, x0, EvolutionConfig(2.0, 1e-2));
  const Mat step = matrix_exponential(1e-2 * a.entries);
  Vec v = traj.states.col(123);
  for (int k = 0; k < 57; ++k) v = (step * v).eval();
  CHECK((v - traj.states.col(180)).norm() <= 1e-12 * v.norm());
}

TEST_CASE("norm conservation over a million skew-hermitian steps") {
  const auto a = diag_model({Complex(0.0, 1.0), Complex(0.0, -M_SQRT2)});
  Vec x0(2);
  x0 << Complex(M_SQRT1_2, 0.0), Complex(0.0, M_SQRT1_2);
  const auto traj = evolve(a, x0, EvolutionConfig(1e4, 1e-2));
  REQUIRE(traj.num_times() == 1000001);
  double worst = 0.0;
  for (int k = 0; k < traj.num_times(); k += 997) {
    worst = std::max(worst, std::abs(traj.states.col(k).norm() - 1.0));
  }
  worst = std::max(worst, std::abs(traj.states.col(traj.num_times() - 1).norm() - 1.0));
  CHECK(worst <= 1e-10);
}

TEST_CASE("companion derivatives pass through") {
  const std::vector<OperatorHandle> ops{scalar_op(2.0), scalar_op(3.0)};
  const auto comp = build_companion(ops);
  Vec x0(2);
  x0 << Complex(1.0, 0.0), Complex(0.0, 0.0);
  const auto traj = evolve(comp, x0, EvolutionConfig(1.0, 1e-2));
  const auto derivs = extract_derivatives(traj, ops);
  CHECK((derivs.components[0] - traj.states.topRows(1)).norm() == 0.0);
  CHECK((derivs.components[1] - traj.states.bottomRows(1)).norm() == 0.0);
}

TEST_CASE("delta derivatives recover u' through psi") {
  const std::vector<OperatorHandle> ops{scalar_op(2.0), scalar_op(3.0)};
  const auto delta = build_delta(ops);
  InitialData init;
  init.components = {Vec::Constant(1, Complex(1.0, 0.0)), Vec::Constant(1, Complex(0.0, 0.0))};
  const Vec y0 = derivatives_to_delta_state(ops, init);
  const auto traj = evolve(delta, y0, EvolutionConfig(2.0, 1e-3));
  const auto derivs = extract_derivatives(traj, ops);

  // block 2 minus 3*block 1 is u'
  for (int k = 0; k < traj.num_times(); k += 50) {
    const Complex expect = traj.states(1, k) - 3.0 * traj.states(0, k);
    CHECK(std::abs(derivs.components[1].col(k)(0) - expect) < 1e-13);
  }

  // reapplying the forward map reproduces the stored states
  const auto psi = build_psi(ops);
  double worst = 0.0;
  for (int k = 0; k < traj.num_times(); ++k) {
    Vec stacked(2);
    stacked << derivs.components[0].col(k)(0), derivs.components[1].col(k)(0);
    worst = std::max(worst, (psi.apply(stacked) - traj.states.col(k)).norm());
  }
  CHECK(worst <= 1e-10);

  // centered differencing of u matches the recovered u' at O(dt^2)
  for (int k = 1; k + 1 < traj.num_times(); k += 100) {
    const Complex fd =
        (derivs.components[0].col(k + 1)(0) - derivs.components[0].col(k - 1)(0)) / (2e-3);
    CHECK(std::abs(fd - derivs.components[1].col(k)(0)) < 1e-5);
  }
}

TEST_CASE("acp residual for the scalar first-order oracle") {
  const std::vector<OperatorHandle> ops{scalar_op(0.3)};
  const auto comp = build_companion(ops);
  const auto traj = evolve(comp, Vec::Constant(1, Complex(1.0, 0.0)), EvolutionConfig(2.0, 1e-3));
  const auto derivs = extract_derivatives(traj, ops);
  CHECK(acp_residual(derivs, ops) <= 1e-8);
}

TEST_CASE("acp residual for the second-order oracle, with dt^2 convergence") {
  const std::vector<OperatorHandle> ops{scalar_op(2.0), scalar_op(3.0)};
  const auto comp = build_companion(ops);
  Vec x0(2);
  x0 << Complex(1.0, 0.0), Complex(0.0, 0.0);
  auto residual_at = [&](double dt) {
    const auto traj = evolve(comp, x0, EvolutionConfig(2.0, dt));
    return acp_residual(extract_derivatives(traj, ops), ops);
  };
  const double r1 = residual_at(1e-3);
  CHECK(r1 <= 1e-5);
  const double r2 = residual_at(5e-4);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.125));
}

TEST_CASE("acp residual vanishes on zero data") {
  const std::vector<OperatorHandle> ops{scalar_op(2.0), scalar_op(3.0)};
  const auto traj =
      evolve(build_companion(ops), Vec::Zero(2), EvolutionConfig(1.0, 1e-2));
  CHECK(acp_residual(extract_derivatives(traj, ops), ops) == 0.0);
}

TEST_CASE("gaussian regularizer on a diagonal model") {
  const auto a = diag_model({Complex(0.0, 1.0), Complex(0.0, 2.0)});
  const auto pair = build_regularizer(a, RegularizerKind::SpectralGaussian);
  CHECK(std::abs(pair.c.entries(0, 0) - std::exp(-1.0)) < 1e-12);
  CHECK(std::abs(pair.c.entries(1, 1) - std::exp(-4.0)) < 1e-12);
  CHECK(pair.commutator_residual <= 1e-12);
  CHECK(pair.smallest_singular_value > 0.0);
}

TEST_CASE("resolvent regularizer on a nilpotent block") {
  Mat n = Mat::Zero(2, 2);
  n(0, 1) = 1.0;
  const auto pair = build_regularizer(OperatorHandle(n), RegularizerKind::ResolventPower,
                                      Complex(1.0, 0.0), 1);
  // (I - N)^{-1} = I + N exactly
  CHECK(std::abs(pair.c.entries(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(pair.c.entries(0, 1) - 1.0) < 1e-15);
  CHECK(std::abs(pair.c.entries(1, 0)) < 1e-15);
  CHECK(std::abs(pair.c.entries(1, 1) - 1.0) < 1e-15);
}

TEST_CASE("regularizer commutes for functions of the operator") {
  Rng rng(8);
  const Mat m = random_matrix(rng, 5, 1.0);
  const auto pair = build_regularizer(OperatorHandle(m), RegularizerKind::ResolventPower,
                                      Complex(4.0, 1.0), 2);
  CHECK(pair.commutator_residual <= 1e-12);
}

TEST_CASE("regularizer rejects spectral lambda and defective gaussian input") {
  const auto a = diag_model({Complex(1.0, 0.0), Complex(2.0, 0.0)});
  try {
    build_regularizer(a, RegularizerKind::ResolventPower, Complex(1.0, 0.0), 1);
    FAIL("expected LAMBDA_IN_SPECTRUM");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LambdaInSpectrum);
  }

  Mat jordan = Mat::Zero(2, 2);
  jordan(0, 1) = 1.0;  // defective: eigenbasis collapses
  try {
    build_regularizer(OperatorHandle(jordan), RegularizerKind::SpectralGaussian);
    FAIL("expected NOT_DIAGONALIZABLE");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotDiagonalizable);
  }
}

TEST_CASE("regularized axioms for the zero generator") {
  const auto a = OperatorHandle::zero(3);
  const auto pair = build_regularizer(a, RegularizerKind::ResolventPower, Complex(1.0, 0.0), 1);
  const std::vector<double> ts{0.5, 1.0};
  const auto rep = cregularized_check(pair, ts);
  CHECK(rep.commute_with_a == 0.0);
  CHECK(rep.commute_with_c <= 1e-15);
  CHECK(rep.integral_identity <= 1e-12);
  CHECK(rep.composition_law <= 1e-15);
}

TEST_CASE("regularized axioms for a diagonal model with gaussian C") {
  const auto a = diag_model({Complex(0.0, 1.0), Complex(0.0, 2.0)});
  const auto pair = build_regularizer(a, RegularizerKind::SpectralGaussian);
  const std::vector<double> ts{0.5, 1.0, 2.0};
  const auto rep = cregularized_check(pair, ts);
  CHECK(rep.commute_with_a <= 1e-9);
  CHECK(rep.commute_with_c <= 1e-9);
  CHECK(rep.integral_identity <= 1e-9);
  CHECK(rep.composition_law <= 1e-9);
}

TEST_CASE("a non-commuting C is detected") {
  const auto a = diag_model({Complex(0.0, 1.0), Complex(0.0, 2.0)});
  RegularizedPair broken;
  broken.a = a;
  Mat c(2, 2);
  c << 1.0, 0.5, 0.0, 1.0;  // upper-triangular, does not commute with diag
  broken.c = OperatorHandle(c);
  const std::vector<double> ts{1.0};
  const auto rep = cregularized_check(broken, ts);
  const double commutator = (a.entries * c - c * a.entries).norm();
  CHECK(rep.commute_with_c >= 0.1 * commutator);
}
