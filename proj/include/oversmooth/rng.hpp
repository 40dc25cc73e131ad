#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <Eigen/Dense>

namespace oversmooth {

using Rng = std::mt19937_64;

// splitmix64 finalizer. Used to derive independent child seeds from a base
// seed and a sequence of indices.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// seed_0 = base; seed_{k+1} = splitmix64(seed_k ^ index_k).
constexpr std::uint64_t derive_seed(std::uint64_t base,
                                    std::initializer_list<std::uint64_t> indices) noexcept {
  std::uint64_t s = base;
  for (auto i : indices) s = splitmix64(s ^ i);
  return s;
}

// Standard-normal matrix, filled column-major from a fresh engine.
Eigen::MatrixXd gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::uint64_t seed);

}  // namespace oversmooth
