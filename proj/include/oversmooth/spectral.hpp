#pragma once

#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "oversmooth/graph.hpp"

namespace oversmooth {

// Ascending eigenvalues with orthonormal eigenvectors in matching columns.
struct Spectrum {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  double zero_tol = 0.0;

  Eigen::Index size() const noexcept { return eigenvalues.size(); }
  bool is_zero(Eigen::Index i) const { return std::abs(eigenvalues(i)) <= zero_tol; }
  Eigen::Index kernel_dim() const;
};

// 1e-8 * max(1, |lambda_max|).
double default_zero_tol(const Eigen::VectorXd& eigenvalues);

// Full dense symmetric decomposition. zero_tol defaults to default_zero_tol.
// Throws NumericError if the solver does not converge.
Spectrum eigendecompose(const SymMatrix& m, std::optional<double> zero_tol = std::nullopt);

struct ContractionFactors {
  double lambda_min_nonzero;  // smallest eigenvalue classified nonzero
  double lambda_bar_paper;    // (1 - lambda_min_nonzero)^2
  double lambda_bar_safe;     // max over nonzero eigenvalues of (1 - lambda_i)^2
  Eigen::Index kernel_dim;
};

// Throws DegenerateSpectrumError when every eigenvalue is classified zero.
ContractionFactors contraction_factors(const Spectrum& s);

// P(x) = a_0 + a_1 x + ... + a_k x^k.
class PolynomialFilter {
 public:
  // Throws ValidationError when empty or non-finite.
  explicit PolynomialFilter(std::vector<double> coefficients);

  // Degree-1 filter 1 - x, i.e. the plain propagation matrix.
  static PolynomialFilter propagation() { return PolynomialFilter({1.0, -1.0}); }

  const std::vector<double>& coefficients() const noexcept { return coeffs_; }
  std::size_t degree() const noexcept { return coeffs_.size() - 1; }

  double operator()(double x) const;
  PolynomialFilter derivative() const;

  friend bool operator==(const PolynomialFilter&, const PolynomialFilter&) = default;

 private:
  std::vector<double> coeffs_;
};

inline double eval_filter_scalar(const PolynomialFilter& f, double x) { return f(x); }

// V diag(P(lambda_i)) V^T.
SymMatrix eval_filter_matrix(const PolynomialFilter& f, const Spectrum& s);

struct MonotonicityResult {
  bool decreasing;
  std::optional<double> witness;  // a point with P'(x) > 0 when !decreasing
};

// Decides P' <= 0 on [lo, hi] from a 10,001-point uniform grid plus every
// real root of P'' inside the interval. Throws ValidationError if lo >= hi.
MonotonicityResult check_monotone_decreasing(const PolynomialFilter& f, double lo, double hi);

struct FilterContraction {
  double paper;  // P(lambda_min_nonzero)^2
  double safe;   // max over nonzero eigenvalues of P(lambda_i)^2
};

FilterContraction filter_contraction(const PolynomialFilter& f, const Spectrum& s);

// Laplacian of a graph together with its spectrum, computed once.
struct SpectralContext {
  SymMatrix laplacian;
  Spectrum spectrum;
  Graph graph;

  static SpectralContext of(const Graph& g);
};

// Real roots of a polynomial given in ascending coefficient order.
std::vector<double> real_roots(const std::vector<double>& coefficients, double imag_tol = 1e-9);

}  // namespace oversmooth
