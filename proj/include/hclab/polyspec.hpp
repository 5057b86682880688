#pragma once

#include <utility>
#include <vector>

#include "hclab/types.hpp"

namespace hclab {

/// Dense complex polynomial, coefficients lowest degree first.
///
/// The zero polynomial has an empty coefficient vector and degree -1.
/// Construction trims trailing (exact) zeros so that the coefficient at
/// index degree() is nonzero for every nonzero polynomial.
class ComplexPoly {
 public:
  ComplexPoly() = default;
  explicit ComplexPoly(std::vector<Complex> coeffs);

  static ComplexPoly zero() { return ComplexPoly(); }
  static ComplexPoly constant(Complex c);
  /// c * z^k
  static ComplexPoly monomial(int k, Complex c = Complex(1.0, 0.0));

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }

  /// Coefficient of z^k; zero beyond the stored degree.
  Complex coeff(int k) const;

  Complex eval(Complex z) const;

  ComplexPoly operator+(const ComplexPoly& rhs) const;
  ComplexPoly operator-(const ComplexPoly& rhs) const;
  ComplexPoly operator*(const ComplexPoly& rhs) const;
  ComplexPoly operator*(Complex scale) const;
  ComplexPoly operator-() const;

  /// Multiply by z^k (coefficient shift).
  ComplexPoly shifted_up(int k) const;

  bool operator==(const ComplexPoly& rhs) const { return coeffs_ == rhs.coeffs_; }

 private:
  std::vector<Complex> coeffs_;
};

inline Complex poly_eval(const ComplexPoly& p, Complex z) { return p.eval(z); }

enum class CurveKind { Identity, Table };

/// Symbol curve g attached to an eigenfield: either g(it) = it on an
/// interval, or a finite table of (t, g(it)) samples with no interpolation.
struct SymbolCurve {
  CurveKind kind = CurveKind::Identity;
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::pair<double, Complex>> samples;

  static SymbolCurve identity(double lo, double hi);
  static SymbolCurve table(std::vector<std::pair<double, Complex>> samples);

  bool contains(double t) const;
  /// Throws OUT_OF_DOMAIN outside the interval / off the sample set.
  Complex eval(double t) const;
};

/// Order-n spectral data: polynomials P_0, ..., P_{n-1} and the symbol
/// curve entering the characteristic identity
///   (it)^n + sum_{l=0}^{n-1} (it)^l P_l(g(it)) = 0.
struct SpectralCondition {
  int order = 1;
  std::vector<ComplexPoly> polys;  // exactly `order` entries
  SymbolCurve symbol;

  SpectralCondition(int n, std::vector<ComplexPoly> p, SymbolCurve g);
};

/// Pointwise residual r(t) = (it)^n + sum_l (it)^l P_l(g(it)).
Complex characteristic_residual(const SpectralCondition& cond, double t);

/// Outcome of the coefficient-wise check of q(z) = z^n + sum_l z^l P_l(z).
///
/// `holds` reports exact vanishing: the expansion is carried out in exact
/// rational arithmetic over the (always dyadic-rational) double inputs, so
/// a true result is a certificate, not a tolerance statement. `offending`
/// lists the surviving coefficients as (degree, value) pairs; coefficients
/// whose magnitude stays below 1e-12 times the input scale are also
/// reported in `negligible_only`.
struct ConditionCertificate {
  bool holds = false;
  bool negligible_only = false;
  std::vector<std::pair<int, Complex>> offending;
};

/// Expand q(z) coefficient-wise (g must be the identity curve) and certify
/// whether it vanishes identically. Throws UNSUPPORTED_CURVE otherwise.
ConditionCertificate condition_holds_symbolic(const SpectralCondition& cond);

/// Solve the identity-curve characteristic condition for the missing top
/// polynomial: P_{n-1}(z) = -(z^n + sum_{l<=n-2} z^l P_l(z)) / z^{n-1}.
/// `lower` holds P_0, ..., P_{n-2}. Throws NOT_DIVISIBLE (naming the
/// surviving low-order coefficient) when the division does not go through.
ComplexPoly complete_condition(int order, const std::vector<ComplexPoly>& lower);

/// The expanded q(z) itself, computed in double arithmetic.
ComplexPoly characteristic_polynomial(int order, const std::vector<ComplexPoly>& polys);

}  // namespace hclab
