#include "oversmooth/energy.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <string>

#include "oversmooth/errors.hpp"

namespace oversmooth {

namespace {

std::atomic<std::size_t> g_clamps{0};

void check_rows(const EmbeddingMatrix& x, Eigen::Index n) {
  if (x.rows() != n) {
    throw ValidationError("embedding has " + std::to_string(x.rows()) + " rows but the graph has " +
                          std::to_string(n) + " nodes");
  }
  if (!x.allFinite()) throw ValidationError("embedding has non-finite entries");
}

double clamp_roundoff(double e, const EmbeddingMatrix& x) {
  if (e >= 0.0) return e;
  const double slack = 1e-12 * std::max(1.0, x.squaredNorm());
  if (e < -slack) {
    throw NumericError("negative Dirichlet energy " + std::to_string(e) + " beyond round-off");
  }
  g_clamps.fetch_add(1, std::memory_order_relaxed);
  if (std::getenv("OVERSMOOTH_VERBOSE") != nullptr) {
    std::cerr << "oversmooth: clamped round-off energy " << e << " to 0\n";
  }
  return 0.0;
}

}  // namespace

double dirichlet_energy_trace(const EmbeddingMatrix& x, const SymMatrix& lap) {
  check_rows(x, lap.dim());
  const double e = x.cwiseProduct(lap.matrix() * x).sum();
  return clamp_roundoff(e, x);
}

double dirichlet_energy_edge_sum(const EmbeddingMatrix& x, const Graph& g) {
  check_rows(x, static_cast<Eigen::Index>(g.num_nodes()));
  const Eigen::VectorXd inv_sqrt = augmented_degrees(g).cwiseSqrt().cwiseInverse();
  double e = 0.0;
  for (const auto& edge : g.edges()) {
    const auto i = static_cast<Eigen::Index>(edge.u);
    const auto j = static_cast<Eigen::Index>(edge.v);
    e += edge.w * (x.row(i) * inv_sqrt(i) - x.row(j) * inv_sqrt(j)).squaredNorm();
  }
  return e;
}

double rayleigh_quotient(const EmbeddingMatrix& x, const SymMatrix& lap) {
  const double denom = x.squaredNorm();
  if (!(denom > 0.0)) throw ValidationError("Rayleigh quotient of a zero embedding is undefined");
  return dirichlet_energy_trace(x, lap) / denom;
}

std::size_t energy_clamp_count() noexcept { return g_clamps.load(std::memory_order_relaxed); }

}  // namespace oversmooth
