#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "oversmooth/generators.hpp"
#include "oversmooth/graph.hpp"

namespace oversmooth {

struct FixedFieldProbe {
  Eigen::Index channels = 4;
  std::uint64_t seed = 0;
};
struct SpectrumOnlyProbe {};
using Probe = std::variant<FixedFieldProbe, SpectrumOnlyProbe>;

struct SweepConfig {
  std::string graph_source;  // file path or gen:<kind>:<args>
  std::vector<double> drop_ratios;
  std::vector<std::size_t> boost_counts;
  double boost_factor = 10000.0;
  std::size_t trials = 1;
  std::uint64_t base_seed = 0;
  Probe probe = FixedFieldProbe{};

  // Throws ValidationError on empty lists, out-of-range values, trials == 0.
  void validate() const;
};

enum class SweepOp { Drop, Boost };

struct SweepRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;
  SweepOp op = SweepOp::Drop;
  double param = 0.0;  // drop ratio or boost count
  std::size_t edges_before = 0;
  std::size_t edges_after = 0;
  double lambda_min_before = 0.0;
  double lambda_min_after = 0.0;   // NaN when degenerate
  double lambda_bar_safe_before = 0.0;
  double lambda_bar_safe_after = 0.0;
  double energy_before = 0.0;      // NaN for SpectrumOnly
  double energy_after = 0.0;
  bool degenerate = false;         // perturbed graph has no nonzero eigenvalue
  std::uint64_t probe_checksum = 0;
};

// Seed of trial t: splitmix64(base_seed ^ t).
std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial);

// Rows ordered by (trial, drops in config order, boosts in config order).
std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const Graph& base);
std::vector<SweepRow> run_sweep(const SweepConfig& cfg);

struct DualityEntry {
  std::size_t boost_count = 0;
  double drop_ratio = 0.0;
  double mean_lambda_distance = 0.0;  // |Δλ_min(drop) - Δλ_min(boost)|
  double mean_energy_distance = 0.0;  // |ΔE(drop) - ΔE(boost)|, NaN without a probe
  std::size_t trials_used = 0;        // trials where neither row is degenerate
};

// Throws ValidationError unless both drop and boost rows are present.
std::vector<DualityEntry> duality_report(const std::vector<SweepRow>& rows);

struct DropEnergyStats {
  double drop_ratio = 0.0;
  std::size_t rows = 0;
  std::size_t increased = 0;
  double fraction() const { return rows == 0 ? 0.0 : static_cast<double>(increased) / rows; }
};

// Per drop ratio, how many non-degenerate rows raised the probe energy.
std::vector<DropEnergyStats> drop_energy_stats(const std::vector<SweepRow>& rows);

}  // namespace oversmooth
