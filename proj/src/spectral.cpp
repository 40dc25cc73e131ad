#include "oversmooth/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include <Eigen/Eigenvalues>

#include "oversmooth/errors.hpp"

namespace oversmooth {

Eigen::Index Spectrum::kernel_dim() const {
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < size(); ++i) k += is_zero(i) ? 1 : 0;
  return k;
}

double default_zero_tol(const Eigen::VectorXd& eigenvalues) {
  const double top = eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return 1e-8 * std::max(1.0, top);
}

Spectrum eigendecompose(const SymMatrix& m, std::optional<double> zero_tol) {
  if (zero_tol && !(*zero_tol >= 0.0)) throw ValidationError("zero_tol must be nonnegative");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) throw NumericError("symmetric eigensolver did not converge");
  Spectrum s;
  s.eigenvalues = solver.eigenvalues();
  s.eigenvectors = solver.eigenvectors();
  s.zero_tol = zero_tol.value_or(default_zero_tol(s.eigenvalues));
  return s;
}

namespace {

Eigen::Index first_nonzero(const Spectrum& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (!s.is_zero(i)) return i;
  throw DegenerateSpectrumError("every eigenvalue is zero; the minimal nonzero eigenvalue is undefined");
}

}  // namespace

ContractionFactors contraction_factors(const Spectrum& s) {
  const Eigen::Index lo = first_nonzero(s);
  ContractionFactors cf{};
  cf.lambda_min_nonzero = s.eigenvalues(lo);
  cf.lambda_bar_paper = (1.0 - cf.lambda_min_nonzero) * (1.0 - cf.lambda_min_nonzero);
  cf.lambda_bar_safe = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.is_zero(i)) continue;
    const double t = 1.0 - s.eigenvalues(i);
    cf.lambda_bar_safe = std::max(cf.lambda_bar_safe, t * t);
  }
  cf.kernel_dim = s.kernel_dim();
  return cf;
}

PolynomialFilter::PolynomialFilter(std::vector<double> coefficients) : coeffs_(std::move(coefficients)) {
  if (coeffs_.empty()) throw ValidationError("polynomial filter needs at least one coefficient");
  for (double a : coeffs_)
    if (!std::isfinite(a)) throw ValidationError("polynomial filter coefficients must be finite");
}

double PolynomialFilter::operator()(double x) const {
  double acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

PolynomialFilter PolynomialFilter::derivative() const {
  if (coeffs_.size() == 1) return PolynomialFilter({0.0});
  std::vector<double> d(coeffs_.size() - 1);
  for (std::size_t j = 1; j < coeffs_.size(); ++j) d[j - 1] = static_cast<double>(j) * coeffs_[j];
  return PolynomialFilter(std::move(d));
}

SymMatrix eval_filter_matrix(const PolynomialFilter& f, const Spectrum& s) {
  Eigen::VectorXd mapped(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) mapped(i) = f(s.eigenvalues(i));
  Eigen::MatrixXd m = s.eigenvectors * mapped.asDiagonal() * s.eigenvectors.transpose();
  // Round-off leaves m asymmetric at the ulp level.
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  return SymMatrix(std::move(sym));
}

std::vector<double> real_roots(const std::vector<double>& coefficients, double imag_tol) {
  std::size_t deg = coefficients.size();
  while (deg > 0 && coefficients[deg - 1] == 0.0) --deg;
  if (deg <= 1) return {};
  --deg;
  if (deg == 1) return {-coefficients[0] / coefficients[1]};

  const double lead = coefficients[deg];
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(deg), static_cast<Eigen::Index>(deg));
  for (std::size_t i = 1; i < deg; ++i) companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < deg; ++i)
    companion(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(deg - 1)) = -coefficients[i] / lead;

  Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw NumericError("companion-matrix eigensolver did not converge");
  std::vector<double> roots;
  for (const auto& z : solver.eigenvalues()) {
    if (std::abs(z.imag()) <= imag_tol * std::max(1.0, std::abs(z))) roots.push_back(z.real());
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

MonotonicityResult check_monotone_decreasing(const PolynomialFilter& f, double lo, double hi) {
  if (!(lo < hi)) throw ValidationError("monotonicity interval needs lo < hi");
  const PolynomialFilter d1 = f.derivative();
  const PolynomialFilter d2 = d1.derivative();

  // Slack proportional to the magnitude of the terms of P'(x).
  auto increasing_at = [&](double x) {
    double scale = 0.0;
    double pw = 1.0;
    for (double b : d1.coefficients()) {
      scale += std::abs(b) * pw;
      pw *= std::abs(x);
    }
    return d1(x) > 1e-12 * scale;
  };

  constexpr int kGrid = 10001;
  for (int i = 0; i < kGrid; ++i) {
    const double x = i == kGrid - 1 ? hi : lo + (hi - lo) * static_cast<double>(i) / (kGrid - 1);
    if (increasing_at(x)) return {false, x};
  }
  for (double r : real_roots(d2.coefficients())) {
    if (r >= lo && r <= hi && increasing_at(r)) return {false, r};
  }
  return {true, std::nullopt};
}

FilterContraction filter_contraction(const PolynomialFilter& f, const Spectrum& s) {
  const Eigen::Index lo = first_nonzero(s);
  const double at_min = f(s.eigenvalues(lo));
  FilterContraction out{at_min * at_min, 0.0};
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s.is_zero(i)) continue;
    const double v = f(s.eigenvalues(i));
    out.safe = std::max(out.safe, v * v);
  }
  return out;
}

SpectralContext SpectralContext::of(const Graph& g) {
  SymMatrix lap = augmented_normalized_laplacian(g);
  Spectrum s = eigendecompose(lap);
  return SpectralContext{std::move(lap), std::move(s), g};
}

}  // namespace oversmooth
