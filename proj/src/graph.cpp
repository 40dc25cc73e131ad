#include "oversmooth/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <tuple>

#include "oversmooth/errors.hpp"
#include "oversmooth/io.hpp"

namespace oversmooth {

Graph::Graph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  if (n_ == 0) throw ValidationError("graph must have at least one node");
  for (auto& e : edges_) {
    if (e.u >= n_ || e.v >= n_) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") has a node id outside [0, " + std::to_string(n_) + ")");
    }
    if (e.u == e.v) throw ValidationError("self-loop on node " + std::to_string(e.u));
    if (!std::isfinite(e.w) || e.w <= 0.0) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") has non-positive or non-finite weight");
    }
    if (e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return std::tie(a.u, a.v) < std::tie(b.u, b.v); });
  auto dup = std::adjacent_find(edges_.begin(), edges_.end(),
                                [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; });
  if (dup != edges_.end()) {
    throw ValidationError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
  }
}

SymMatrix::SymMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw ValidationError("matrix is not square");
  if (!m_.allFinite()) throw ValidationError("matrix has non-finite entries");
  for (Eigen::Index j = 0; j < m_.cols(); ++j) {
    for (Eigen::Index i = j + 1; i < m_.rows(); ++i) {
      if (std::abs(m_(i, j) - m_(j, i)) > kSymmetryTol) {
        throw ValidationError("matrix is not symmetric at (" + std::to_string(i) + "," +
                              std::to_string(j) + ")");
      }
    }
  }
}

namespace {

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::size_t parse_node(std::string_view tok, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || ptr != tok.data() + tok.size()) {
    throw ParseError("invalid node id '" + std::string(tok) + "'", line);
  }
  return v;
}

double parse_weight(std::string_view tok, std::size_t line) {
  // std::from_chars for double is missing on older libstdc++.
  std::string s(tok);
  char* end = nullptr;
  double w = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size()) {
    throw ParseError("invalid weight '" + s + "'", line);
  }
  return w;
}

}  // namespace

Graph from_edge_list(std::string_view text, std::optional<std::size_t> n_hint) {
  std::map<std::pair<NodeId, NodeId>, double> merged;
  std::size_t max_id = 0;
  bool any = false;
  std::optional<std::size_t> header_n;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);

    if (auto hash = line.find('#'); hash != std::string_view::npos) {
      // "# nodes N" written by to_edge_list keeps trailing isolated nodes.
      auto comment = split_ws(trim(line.substr(hash + 1)));
      if (comment.size() == 2 && comment[0] == "nodes") header_n = parse_node(comment[1], line_no);
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    auto toks = split_ws(line);
    if (toks.size() != 2 && toks.size() != 3) {
      throw ParseError("expected 'u v' or 'u v w', got " + std::to_string(toks.size()) + " fields",
                       line_no);
    }
    NodeId u = parse_node(toks[0], line_no);
    NodeId v = parse_node(toks[1], line_no);
    double w = toks.size() == 3 ? parse_weight(toks[2], line_no) : 1.0;
    if (u == v) {
      throw ValidationError("line " + std::to_string(line_no) + ": explicit self-loop on node " +
                            std::to_string(u) + " (self-loops are added by augmentation)");
    }
    if (!std::isfinite(w) || w <= 0.0) {
      throw ValidationError("line " + std::to_string(line_no) + ": weight must be positive and finite");
    }
    if (u > v) std::swap(u, v);
    merged[{u, v}] += w;
    max_id = std::max(max_id, v);
    any = true;
  }
  std::size_t n = any ? max_id + 1 : 0;
  if (header_n) n = std::max(n, *header_n);
  if (n_hint) n = std::max(n, *n_hint);
  if (n == 0) throw ValidationError("edge list is empty and no node count was given");

  std::vector<Edge> edges;
  edges.reserve(merged.size());
  for (const auto& [uv, w] : merged) edges.push_back({uv.first, uv.second, w});
  return Graph(n, std::move(edges));
}

std::string to_edge_list(const Graph& g) {
  std::ostringstream os;
  os << "# nodes " << g.num_nodes() << "\n";
  for (const auto& e : g.edges()) os << e.u << ' ' << e.v << ' ' << format_double(e.w) << '\n';
  return os.str();
}

Eigen::VectorXd augmented_degrees(const Graph& g) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g.num_nodes()));
  for (const auto& e : g.edges()) {
    d(static_cast<Eigen::Index>(e.u)) += e.w;
    d(static_cast<Eigen::Index>(e.v)) += e.w;
  }
  return d;
}

SymMatrix augmented_normalized_laplacian(const Graph& g) {
  const Eigen::VectorXd d = augmented_degrees(g);
  const auto n = d.size();
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) lap(i, i) = 1.0 - 1.0 / d(i);
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.u);
    const auto j = static_cast<Eigen::Index>(e.v);
    const double off = -e.w / std::sqrt(d(i) * d(j));
    lap(i, j) = off;
    lap(j, i) = off;
  }
  return SymMatrix(std::move(lap));
}

SymMatrix propagation_matrix(const Graph& g) {
  const Eigen::VectorXd d = augmented_degrees(g);
  const auto n = d.size();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) p(i, i) = 1.0 / d(i);
  for (const auto& e : g.edges()) {
    const auto i = static_cast<Eigen::Index>(e.u);
    const auto j = static_cast<Eigen::Index>(e.v);
    const double off = e.w / std::sqrt(d(i) * d(j));
    p(i, j) = off;
    p(j, i) = off;
  }
  return SymMatrix(std::move(p));
}

std::vector<std::vector<NodeId>> connected_components(const Graph& g) {
  const std::size_t n = g.num_nodes();
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (const auto& e : g.edges()) {
    auto a = find(e.u);
    auto b = find(e.v);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::vector<NodeId>> out;
  std::vector<std::size_t> slot(n, n);
  for (NodeId i = 0; i < n; ++i) {
    auto r = find(i);
    if (slot[r] == n) {
      slot[r] = out.size();
      out.emplace_back();
    }
    out[slot[r]].push_back(i);
  }
  return out;
}

bool is_regular(const Graph& g, double tol) {
  const Eigen::VectorXd d = augmented_degrees(g);
  return ((d.array() - d(0)).abs() <= tol).all();
}

}  // namespace oversmooth
