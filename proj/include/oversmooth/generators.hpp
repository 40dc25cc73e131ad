#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <variant>

#include "oversmooth/graph.hpp"

namespace oversmooth {

namespace gen {
struct ErdosRenyi {
  std::size_t n;
  double p;
};
struct Ring {
  std::size_t n;
};
// Circulant: node i joins i±1, …, i±k/2 (mod n). k even, k < n.
struct KRegular {
  std::size_t n;
  std::size_t k;
};
struct Complete {
  std::size_t n;
};
struct Path {
  std::size_t n;
};
}  // namespace gen

using GeneratorSpec = std::variant<gen::ErdosRenyi, gen::Ring, gen::KRegular, gen::Complete, gen::Path>;

// Unit-weight graph; deterministic for fixed (spec, seed). Only ErdosRenyi
// consumes randomness.
Graph generate(const GeneratorSpec& spec, std::uint64_t seed);

// A graph source string is either a file path or a generator mini-spec:
//   gen:er:<n>:<p>[:<seed>]   gen:ring:<n>   gen:kregular:<n>:<k>
//   gen:complete:<n>          gen:path:<n>
bool is_generator_source(std::string_view source);
Graph load_graph(std::string_view source);

enum class PerturbKind { DropEdges, BoostEdges };

struct PerturbationPlan {
  PerturbKind kind = PerturbKind::DropEdges;
  double drop_ratio = 0.0;     // DropEdges: fraction in [0, 1]
  std::size_t boost_count = 0; // BoostEdges: number of edges
  double boost_factor = 1.0;   // BoostEdges: >= 1
  std::uint64_t seed = 0;

  static PerturbationPlan drop(double ratio, std::uint64_t seed);
  static PerturbationPlan boost(std::size_t count, double factor, std::uint64_t seed);
};

// ceil(ratio * m), guarded against binary round-up of exact products.
std::size_t drop_count(double ratio, std::size_t m);

// DropEdges removes exactly drop_count(ratio, |E|) uniformly chosen edges;
// BoostEdges multiplies `count` uniformly chosen weights by the factor.
Graph perturb(const Graph& g, const PerturbationPlan& plan);

}  // namespace oversmooth
