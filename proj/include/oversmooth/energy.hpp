#pragma once

#include <cstddef>

#include <Eigen/Dense>

#include "oversmooth/graph.hpp"

namespace oversmooth {

// N x C node features; row i is node i.
using EmbeddingMatrix = Eigen::MatrixXd;

// tr(X^T L X). Round-off negatives within 1e-12 * max(1, ||X||_F^2) are
// clamped to zero and counted; anything more negative is a NumericError.
double dirichlet_energy_trace(const EmbeddingMatrix& x, const SymMatrix& lap);

// Sum over edges of w_ij * ||x_i / sqrt(d̃_i) - x_j / sqrt(d̃_j)||^2 with
// augmented weighted degrees d̃. Equal to the trace form.
double dirichlet_energy_edge_sum(const EmbeddingMatrix& x, const Graph& g);

// tr(X^T L X) / tr(X^T X). Diagnostic only.
double rayleigh_quotient(const EmbeddingMatrix& x, const SymMatrix& lap);

// Number of clamped round-off negatives since process start.
std::size_t energy_clamp_count() noexcept;

}  // namespace oversmooth
