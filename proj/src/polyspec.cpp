#include "hclab/polyspec.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

namespace hclab {

namespace {

using BigRat = boost::multiprecision::cpp_rational;

// Exact complex rational; every finite double converts losslessly, so the
// expansion of q(z) below is exact for any representable input.
struct RatComplex {
  BigRat re{0};
  BigRat im{0};

  void add(const Complex& c) {
    re += BigRat(c.real());
    im += BigRat(c.imag());
  }
  bool is_zero() const { return re.is_zero() && im.is_zero(); }
  Complex approx() const {
    return Complex(static_cast<double>(re), static_cast<double>(im));
  }
};

// q(z) = z^n + sum_{l in polys} z^l P_l(z), accumulated exactly.
std::vector<RatComplex> expand_exact(int order, const std::vector<ComplexPoly>& polys) {
  int top = order;
  for (std::size_t l = 0; l < polys.size(); ++l) {
    top = std::max(top, static_cast<int>(l) + polys[l].degree());
  }
  std::vector<RatComplex> q(top + 1);
  q[order].add(Complex(1.0, 0.0));
  for (std::size_t l = 0; l < polys.size(); ++l) {
    const auto& c = polys[l].coeffs();
    for (std::size_t k = 0; k < c.size(); ++k) {
      q[l + k].add(c[k]);
    }
  }
  return q;
}

double input_scale(const std::vector<ComplexPoly>& polys) {
  double s = 1.0;
  for (const auto& p : polys) {
    for (const auto& c : p.coeffs()) s = std::max(s, std::abs(c));
  }
  return s;
}

}  // namespace

ComplexPoly::ComplexPoly(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
  while (!coeffs_.empty() && coeffs_.back() == Complex(0.0, 0.0)) coeffs_.pop_back();
}

ComplexPoly ComplexPoly::constant(Complex c) { return ComplexPoly({c}); }

ComplexPoly ComplexPoly::monomial(int k, Complex c) {
  std::vector<Complex> v(k + 1, Complex(0.0, 0.0));
  v[k] = c;
  return ComplexPoly(std::move(v));
}

Complex ComplexPoly::coeff(int k) const {
  if (k < 0 || k >= static_cast<int>(coeffs_.size())) return Complex(0.0, 0.0);
  return coeffs_[k];
}

Complex ComplexPoly::eval(Complex z) const {
  Complex acc(0.0, 0.0);
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

ComplexPoly ComplexPoly::operator+(const ComplexPoly& rhs) const {
  std::vector<Complex> v(std::max(coeffs_.size(), rhs.coeffs_.size()), Complex(0.0, 0.0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) v[i] += coeffs_[i];
  for (std::size_t i = 0; i < rhs.coeffs_.size(); ++i) v[i] += rhs.coeffs_[i];
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::operator-(const ComplexPoly& rhs) const { return *this + (-rhs); }

ComplexPoly ComplexPoly::operator*(const ComplexPoly& rhs) const {
  if (is_zero() || rhs.is_zero()) return ComplexPoly();
  std::vector<Complex> v(coeffs_.size() + rhs.coeffs_.size() - 1, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j) {
      v[i + j] += coeffs_[i] * rhs.coeffs_[j];
    }
  }
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::operator*(Complex scale) const {
  std::vector<Complex> v = coeffs_;
  for (auto& c : v) c *= scale;
  return ComplexPoly(std::move(v));
}

ComplexPoly ComplexPoly::operator-() const { return *this * Complex(-1.0, 0.0); }

ComplexPoly ComplexPoly::shifted_up(int k) const {
  if (is_zero()) return ComplexPoly();
  std::vector<Complex> v(coeffs_.size() + k, Complex(0.0, 0.0));
  std::copy(coeffs_.begin(), coeffs_.end(), v.begin() + k);
  return ComplexPoly(std::move(v));
}

SymbolCurve SymbolCurve::identity(double lo, double hi) {
  SymbolCurve c;
  c.kind = CurveKind::Identity;
  c.lo = lo;
  c.hi = hi;
  return c;
}

SymbolCurve SymbolCurve::table(std::vector<std::pair<double, Complex>> samples) {
  SymbolCurve c;
  c.kind = CurveKind::Table;
  c.samples = std::move(samples);
  std::sort(c.samples.begin(), c.samples.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  if (!c.samples.empty()) {
    c.lo = c.samples.front().first;
    c.hi = c.samples.back().first;
  }
  return c;
}

bool SymbolCurve::contains(double t) const {
  if (kind == CurveKind::Identity) return t >= lo && t <= hi;
  return std::any_of(samples.begin(), samples.end(),
                     [t](const auto& s) { return s.first == t; });
}

Complex SymbolCurve::eval(double t) const {
  if (kind == CurveKind::Identity) {
    require(contains(t), ErrorCode::OutOfDomain,
            "t = " + std::to_string(t) + " outside parameter interval");
    return Complex(0.0, t);
  }
  for (const auto& s : samples) {
    if (s.first == t) return s.second;
  }
  fail(ErrorCode::OutOfDomain,
       "t = " + std::to_string(t) + " is not a stored sample of the table curve");
}

SpectralCondition::SpectralCondition(int n, std::vector<ComplexPoly> p, SymbolCurve g)
    : order(n), polys(std::move(p)), symbol(std::move(g)) {
  require(order >= 1, ErrorCode::ConfigInvalid, "order must be >= 1");
  require(static_cast<int>(polys.size()) == order, ErrorCode::ConfigInvalid,
          "expected exactly n polynomials");
}

Complex characteristic_residual(const SpectralCondition& cond, double t) {
  require(cond.symbol.contains(t), ErrorCode::OutOfDomain,
          "t = " + std::to_string(t) + " outside the condition's domain");
  const Complex g = cond.symbol.eval(t);
  const Complex it(0.0, t);
  Complex acc = Complex(1.0, 0.0);  // (it)^n via repeated multiply below
  for (int l = 0; l < cond.order; ++l) acc *= it;
  Complex pw(1.0, 0.0);
  for (int l = 0; l < cond.order; ++l) {
    acc += pw * cond.polys[l].eval(g);
    pw *= it;
  }
  return acc;
}

ConditionCertificate condition_holds_symbolic(const SpectralCondition& cond) {
  require(cond.symbol.kind == CurveKind::Identity, ErrorCode::UnsupportedCurve,
          "symbolic check requires the identity curve; table curves only "
          "support pointwise residuals");
  const auto q = expand_exact(cond.order, cond.polys);
  ConditionCertificate cert;
  cert.holds = true;
  cert.negligible_only = true;
  const double tol = 1e-12 * input_scale(cond.polys);
  for (std::size_t k = 0; k < q.size(); ++k) {
    if (!q[k].is_zero()) {
      cert.holds = false;
      const Complex v = q[k].approx();
      if (std::abs(v) > tol) cert.negligible_only = false;
      cert.offending.emplace_back(static_cast<int>(k), v);
    }
  }
  if (cert.holds) cert.negligible_only = false;
  return cert;
}

ComplexPoly complete_condition(int order, const std::vector<ComplexPoly>& lower) {
  require(order >= 1, ErrorCode::ConfigInvalid, "order must be >= 1");
  require(static_cast<int>(lower.size()) == order - 1, ErrorCode::ConfigInvalid,
          "expected n-1 lower polynomials");
  const auto num = expand_exact(order, lower);  // z^n + sum_{l<=n-2} z^l P_l
  for (int k = 0; k < order - 1 && k < static_cast<int>(num.size()); ++k) {
    if (!num[k].is_zero()) {
      std::ostringstream msg;
      msg << "coefficient of z^" << k << " (= " << num[k].approx()
          << ") obstructs division by z^" << (order - 1);
      fail(ErrorCode::NotDivisible, msg.str());
    }
  }
  std::vector<Complex> out;
  for (std::size_t k = order - 1; k < num.size(); ++k) {
    out.push_back(-num[k].approx());
  }
  return ComplexPoly(std::move(out));
}

ComplexPoly characteristic_polynomial(int order, const std::vector<ComplexPoly>& polys) {
  ComplexPoly q = ComplexPoly::monomial(order);
  for (std::size_t l = 0; l < polys.size(); ++l) {
    q = q + polys[l].shifted_up(static_cast<int>(l));
  }
  return q;
}

}  // namespace hclab
