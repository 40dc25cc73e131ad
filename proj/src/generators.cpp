#include "oversmooth/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "oversmooth/errors.hpp"
#include "oversmooth/io.hpp"
#include "oversmooth/rng.hpp"

namespace oversmooth {

Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  return m;
}

namespace {

void require_nodes(std::size_t n) {
  if (n < 1) throw ValidationError("generator needs n >= 1");
}

// Requires 2 * half_k < n so every pair is produced once.
Graph circulant(std::size_t n, std::size_t half_k) {
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t off = 1; off <= half_k; ++off) {
      std::size_t j = (i + off) % n;
      edges.push_back({std::min(i, j), std::max(i, j), 1.0});
    }
  }
  return Graph(n, std::move(edges));
}

struct Generate {
  std::uint64_t seed;

  Graph operator()(const gen::ErdosRenyi& s) const {
    require_nodes(s.n);
    if (!(s.p >= 0.0 && s.p <= 1.0)) throw ValidationError("Erdos-Renyi p must lie in [0, 1]");
    Rng rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < s.n; ++u)
      for (std::size_t v = u + 1; v < s.n; ++v)
        if (unif(rng) < s.p) edges.push_back({u, v, 1.0});
    return Graph(s.n, std::move(edges));
  }

  Graph operator()(const gen::Ring& s) const {
    require_nodes(s.n);
    if (s.n < 3) throw ValidationError("ring needs n >= 3");
    return circulant(s.n, 1);
  }

  Graph operator()(const gen::KRegular& s) const {
    require_nodes(s.n);
    if (s.k % 2 != 0 || s.k >= s.n) {
      throw ValidationError("k-regular circulant needs even k < n (got n=" + std::to_string(s.n) +
                            ", k=" + std::to_string(s.k) + ")");
    }
    return circulant(s.n, s.k / 2);
  }

  Graph operator()(const gen::Complete& s) const {
    require_nodes(s.n);
    std::vector<Edge> edges;
    for (std::size_t u = 0; u < s.n; ++u)
      for (std::size_t v = u + 1; v < s.n; ++v) edges.push_back({u, v, 1.0});
    return Graph(s.n, std::move(edges));
  }

  Graph operator()(const gen::Path& s) const {
    require_nodes(s.n);
    std::vector<Edge> edges;
    for (std::size_t u = 0; u + 1 < s.n; ++u) edges.push_back({u, u + 1, 1.0});
    return Graph(s.n, std::move(edges));
  }
};

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::size_t to_size(const std::string& s, std::string_view what) {
  try {
    std::size_t idx = 0;
    auto v = std::stoull(s, &idx);
    if (idx != s.size() || (!s.empty() && s[0] == '-')) throw std::invalid_argument(s);
    return static_cast<std::size_t>(v);
  } catch (const std::logic_error&) {
    throw ParseError("generator spec: invalid " + std::string(what) + " '" + s + "'");
  }
}

double to_real(const std::string& s, std::string_view what) {
  try {
    std::size_t idx = 0;
    double v = std::stod(s, &idx);
    if (idx != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("generator spec: invalid " + std::string(what) + " '" + s + "'");
  }
}

}  // namespace

Graph generate(const GeneratorSpec& spec, std::uint64_t seed) {
  return std::visit(Generate{seed}, spec);
}

bool is_generator_source(std::string_view source) { return source.substr(0, 4) == "gen:"; }

Graph load_graph(std::string_view source) {
  if (!is_generator_source(source)) return from_edge_list(read_file(std::string(source)));

  auto parts = split(source.substr(4), ':');
  const std::string& kind = parts[0];
  auto want = [&](std::size_t lo, std::size_t hi) {
    if (parts.size() - 1 < lo || parts.size() - 1 > hi) {
      throw ParseError("generator spec '" + std::string(source) + "' has the wrong number of arguments");
    }
  };
  if (kind == "er" || kind == "erdos_renyi") {
    want(2, 3);
    std::uint64_t seed = parts.size() == 4 ? to_size(parts[3], "seed") : 0;
    return generate(gen::ErdosRenyi{to_size(parts[1], "n"), to_real(parts[2], "p")}, seed);
  }
  if (kind == "ring") {
    want(1, 1);
    return generate(gen::Ring{to_size(parts[1], "n")}, 0);
  }
  if (kind == "kregular") {
    want(2, 2);
    return generate(gen::KRegular{to_size(parts[1], "n"), to_size(parts[2], "k")}, 0);
  }
  if (kind == "complete") {
    want(1, 1);
    return generate(gen::Complete{to_size(parts[1], "n")}, 0);
  }
  if (kind == "path") {
    want(1, 1);
    return generate(gen::Path{to_size(parts[1], "n")}, 0);
  }
  throw ParseError("unknown generator kind '" + kind + "'");
}

PerturbationPlan PerturbationPlan::drop(double ratio, std::uint64_t seed) {
  PerturbationPlan p;
  p.kind = PerturbKind::DropEdges;
  p.drop_ratio = ratio;
  p.seed = seed;
  return p;
}

PerturbationPlan PerturbationPlan::boost(std::size_t count, double factor, std::uint64_t seed) {
  PerturbationPlan p;
  p.kind = PerturbKind::BoostEdges;
  p.boost_count = count;
  p.boost_factor = factor;
  p.seed = seed;
  return p;
}

std::size_t drop_count(double ratio, std::size_t m) {
  const double exact = ratio * static_cast<double>(m);
  return static_cast<std::size_t>(std::ceil(exact - 1e-9 * std::max(1.0, exact)));
}

namespace {

// First k entries of a seeded Fisher-Yates shuffle of [0, m).
std::vector<std::size_t> sample_indices(std::size_t m, std::size_t k, std::uint64_t seed) {
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, m - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(k);
  std::sort(idx.begin(), idx.end());
  return idx;
}

}  // namespace

Graph perturb(const Graph& g, const PerturbationPlan& plan) {
  const std::size_t m = g.num_edges();
  auto edges = g.edges();
  if (plan.kind == PerturbKind::DropEdges) {
    if (!(plan.drop_ratio >= 0.0 && plan.drop_ratio <= 1.0)) {
      throw ValidationError("drop ratio must lie in [0, 1]");
    }
    const std::size_t k = drop_count(plan.drop_ratio, m);
    if (k > m) throw ValidationError("drop count exceeds edge count");
    std::vector<bool> removed(m, false);
    for (auto i : sample_indices(m, k, plan.seed)) removed[i] = true;
    std::vector<Edge> kept;
    kept.reserve(m - k);
    for (std::size_t i = 0; i < m; ++i)
      if (!removed[i]) kept.push_back(edges[i]);
    return Graph(g.num_nodes(), std::move(kept));
  }

  if (!(plan.boost_factor >= 1.0) || !std::isfinite(plan.boost_factor)) {
    throw ValidationError("boost factor must be finite and >= 1");
  }
  if (plan.boost_count > m) {
    throw ValidationError("boost count " + std::to_string(plan.boost_count) + " exceeds edge count " +
                          std::to_string(m));
  }
  for (auto i : sample_indices(m, plan.boost_count, plan.seed)) edges[i].w *= plan.boost_factor;
  return Graph(g.num_nodes(), std::move(edges));
}

}  // namespace oversmooth
