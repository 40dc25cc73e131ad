#include "oversmooth/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>
#include <map>

#include "oversmooth/energy.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/io.hpp"
#include "oversmooth/rng.hpp"
#include "oversmooth/spectral.hpp"

namespace oversmooth {

void SweepConfig::validate() const {
  if (graph_source.empty()) throw ValidationError("sweep needs a graph source");
  if (drop_ratios.empty() && boost_counts.empty()) {
    throw ValidationError("sweep needs at least one drop ratio or boost count");
  }
  for (double r : drop_ratios)
    if (!(r > 0.0 && r < 1.0)) throw ValidationError("drop ratios must lie in (0, 1)");
  for (auto k : boost_counts)
    if (k == 0) throw ValidationError("boost counts must be positive");
  if (!(boost_factor >= 1.0) || !std::isfinite(boost_factor)) {
    throw ValidationError("boost factor must be finite and >= 1");
  }
  if (trials == 0) throw ValidationError("trials must be >= 1");
  if (const auto* f = std::get_if<FixedFieldProbe>(&probe); f && f->channels < 1) {
    throw ValidationError("probe channels must be >= 1");
  }
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::size_t trial) { return splitmix64(base_seed ^ trial); }

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct GraphState {
  SymMatrix laplacian;
  std::optional<ContractionFactors> factors;  // empty for a degenerate spectrum
};

GraphState analyze(const Graph& g) {
  SpectralContext ctx = SpectralContext::of(g);
  std::optional<ContractionFactors> cf;
  if (ctx.spectrum.kernel_dim() < ctx.spectrum.size()) cf = contraction_factors(ctx.spectrum);
  return GraphState{std::move(ctx.laplacian), cf};
}

std::uint64_t checksum(const EmbeddingMatrix& x) {
  return fnv1a64(std::string_view(reinterpret_cast<const char*>(x.data()),
                                  static_cast<std::size_t>(x.size()) * sizeof(double)));
}

}  // namespace

std::vector<SweepRow> run_sweep(const SweepConfig& cfg) { return run_sweep(cfg, load_graph(cfg.graph_source)); }

std::vector<SweepRow> run_sweep(const SweepConfig& cfg, const Graph& base) {
  cfg.validate();
  for (auto k : cfg.boost_counts) {
    if (k > base.num_edges()) {
      throw ValidationError("boost count " + std::to_string(k) + " exceeds the base graph's " +
                            std::to_string(base.num_edges()) + " edges");
    }
  }
  const GraphState before = analyze(base);
  const auto n = static_cast<Eigen::Index>(base.num_nodes());

  std::vector<SweepRow> rows;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::uint64_t seed = trial_seed(cfg.base_seed, t);
    std::optional<EmbeddingMatrix> probe;
    if (const auto* f = std::get_if<FixedFieldProbe>(&cfg.probe)) {
      probe = gaussian_matrix(n, f->channels, trial_seed(f->seed, t));
    }
    const double e_before = probe ? dirichlet_energy_trace(*probe, before.laplacian) : kNaN;
    const std::uint64_t sum = probe ? checksum(*probe) : 0;

    auto emit = [&](SweepOp op, double param, const Graph& after_graph) {
      SweepRow r;
      r.trial = t;
      r.seed = seed;
      r.op = op;
      r.param = param;
      r.edges_before = base.num_edges();
      r.edges_after = after_graph.num_edges();
      r.lambda_min_before = before.factors ? before.factors->lambda_min_nonzero : kNaN;
      r.lambda_bar_safe_before = before.factors ? before.factors->lambda_bar_safe : kNaN;
      r.energy_before = e_before;
      const GraphState after = analyze(after_graph);
      r.degenerate = !after.factors.has_value();
      r.lambda_min_after = after.factors ? after.factors->lambda_min_nonzero : kNaN;
      r.lambda_bar_safe_after = after.factors ? after.factors->lambda_bar_safe : kNaN;
      r.energy_after = probe ? dirichlet_energy_trace(*probe, after.laplacian) : kNaN;
      r.probe_checksum = sum;
      rows.push_back(r);
    };

    for (std::size_t i = 0; i < cfg.drop_ratios.size(); ++i) {
      const double ratio = cfg.drop_ratios[i];
      emit(SweepOp::Drop, ratio, perturb(base, PerturbationPlan::drop(ratio, derive_seed(seed, {0xD0, i}))));
    }
    for (std::size_t i = 0; i < cfg.boost_counts.size(); ++i) {
      const auto k = cfg.boost_counts[i];
      emit(SweepOp::Boost, static_cast<double>(k),
           perturb(base, PerturbationPlan::boost(k, cfg.boost_factor, derive_seed(seed, {0xB0, i}))));
    }
  }
  return rows;
}

std::vector<DualityEntry> duality_report(const std::vector<SweepRow>& rows) {
  // trial -> param -> row
  std::map<std::size_t, std::map<double, const SweepRow*>> drops;
  std::map<std::size_t, std::map<double, const SweepRow*>> boosts;
  for (const auto& r : rows) (r.op == SweepOp::Drop ? drops : boosts)[r.trial][r.param] = &r;
  if (drops.empty() || boosts.empty()) {
    throw ValidationError("duality report needs both drop and boost rows");
  }

  std::vector<double> ratios;
  std::vector<double> counts;
  for (const auto& r : rows) {
    auto& list = r.op == SweepOp::Drop ? ratios : counts;
    if (std::find(list.begin(), list.end(), r.param) == list.end()) list.push_back(r.param);
  }

  std::vector<DualityEntry> out;
  for (double k : counts) {
    for (double ratio : ratios) {
      DualityEntry e;
      e.boost_count = static_cast<std::size_t>(k);
      e.drop_ratio = ratio;
      double lam = 0.0;
      double en = 0.0;
      for (const auto& [trial, by_ratio] : drops) {
        auto d = by_ratio.find(ratio);
        auto bt = boosts.find(trial);
        if (d == by_ratio.end() || bt == boosts.end()) continue;
        auto b = bt->second.find(k);
        if (b == bt->second.end()) continue;
        const SweepRow& dr = *d->second;
        const SweepRow& br = *b->second;
        if (dr.degenerate || br.degenerate) continue;
        lam += std::abs((dr.lambda_min_after - dr.lambda_min_before) - (br.lambda_min_after - br.lambda_min_before));
        en += std::abs((dr.energy_after - dr.energy_before) - (br.energy_after - br.energy_before));
        ++e.trials_used;
      }
      e.mean_lambda_distance = e.trials_used ? lam / static_cast<double>(e.trials_used) : kNaN;
      e.mean_energy_distance = e.trials_used ? en / static_cast<double>(e.trials_used) : kNaN;
      out.push_back(e);
    }
  }
  return out;
}

std::vector<DropEnergyStats> drop_energy_stats(const std::vector<SweepRow>& rows) {
  std::vector<DropEnergyStats> out;
  for (const auto& r : rows) {
    if (r.op != SweepOp::Drop || r.degenerate || std::isnan(r.energy_before)) continue;
    auto it = std::find_if(out.begin(), out.end(), [&](const auto& s) { return s.drop_ratio == r.param; });
    if (it == out.end()) {
      out.push_back({r.param, 0, 0});
      it = std::prev(out.end());
    }
    ++it->rows;
    if (r.energy_after > r.energy_before) ++it->increased;
  }
  return out;
}

}  // namespace oversmooth
