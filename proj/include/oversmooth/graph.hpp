#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace oversmooth {

using NodeId = std::size_t;

struct Edge {
  NodeId u;
  NodeId v;
  double w;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Weighted undirected simple graph. Edges are stored once with u < v, sorted
// by (u, v). Self-loops are never stored: the augmented matrices add a unit
// loop to every node implicitly.
class Graph {
 public:
  // Canonicalizes orientation and order. Throws ValidationError on
  // out-of-range ids, self-loops, duplicates, or non-positive weights.
  Graph(std::size_t n, std::vector<Edge> edges);

  std::size_t num_nodes() const noexcept { return n_; }
  std::size_t num_edges() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
};

// Symmetric dense matrix with finite entries. Symmetry is checked to 1e-12
// absolute on construction.
class SymMatrix {
 public:
  static constexpr double kSymmetryTol = 1e-12;

  explicit SymMatrix(Eigen::MatrixXd m);

  Eigen::Index dim() const noexcept { return m_.rows(); }
  const Eigen::MatrixXd& matrix() const noexcept { return m_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

 private:
  Eigen::MatrixXd m_;
};

// Parses "u v" / "u v w" lines; '#' starts a comment; LF or CRLF. Reversed
// duplicates are merged by summing weights.
Graph from_edge_list(std::string_view text, std::optional<std::size_t> n_hint = std::nullopt);

// Inverse of from_edge_list, weights written with 17 significant digits.
std::string to_edge_list(const Graph& g);

// 1 + weighted degree of every node.
Eigen::VectorXd augmented_degrees(const Graph& g);

// I - D̃^{-1/2} Ã D̃^{-1/2}.
SymMatrix augmented_normalized_laplacian(const Graph& g);

// I minus the augmented normalized Laplacian.
SymMatrix propagation_matrix(const Graph& g);

// Components ordered by smallest member; members ascending.
std::vector<std::vector<NodeId>> connected_components(const Graph& g);

// True when every augmented degree matches the first one to `tol` absolute.
bool is_regular(const Graph& g, double tol = 1e-12);

}  // namespace oversmooth
