#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "oversmooth/bounds.hpp"
#include "oversmooth/experiments.hpp"
#include "oversmooth/gcn.hpp"
#include "oversmooth/spectral.hpp"

namespace oversmooth {

inline constexpr std::string_view kToolVersion = "0.1.0";

// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

std::uint64_t fnv1a64(std::string_view bytes);

// "# oversmooth <version>\n# config_hash: <16 hex>\n# seed: <seed>\n"
std::string output_header(const nlohmann::json& resolved_config, std::uint64_t seed);

std::string spectrum_csv(const Spectrum& s);
std::string trajectory_csv(const Trajectory& t);
std::string bound_reports_csv(const std::vector<SuiteTrial>& trials);
std::string suite_summary_text(const std::vector<SuiteSummary>& summaries);

inline constexpr std::string_view kSweepHeader =
    "trial,seed,op,param,edges_before,edges_after,lambda_min_before,lambda_min_after,"
    "lambda_bar_safe_before,lambda_bar_safe_after,energy_before,energy_after";

std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string duality_csv(const std::vector<DualityEntry>& entries);

// Plain numeric CSV (no header, '#' comments allowed) into a dense matrix.
EmbeddingMatrix read_matrix_csv(std::string_view text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

// ---------------------------------------------------------------------------
// Run configuration

enum class RunMode { Standard, Prop71 };

struct WeightSpec {
  Eigen::Index cols = 1;
  double top_singular = 1.0;
};

struct LayerTemplate {
  std::vector<double> filter{1.0, -1.0};
  std::vector<WeightSpec> weights;
  Activation activation = Activation::relu();
};

struct RunConfig {
  std::string graph_source;
  std::uint64_t seed = 0;
  Eigen::Index input_channels = 4;
  std::optional<std::string> features_path;
  ActivationPlacement placement = ActivationPlacement::Paper;
  std::vector<LayerTemplate> layers;
  RunMode mode = RunMode::Standard;
  double epsilon = 0.5;
};

// Throws ValidationError/ParseError on schema violations, including L = 0.
RunConfig parse_run_config(const nlohmann::json& doc);
nlohmann::json to_json(const RunConfig& cfg);

// Realizes the weight stacks: layer l, weight h uses derive_seed(seed, {l, h}).
std::vector<LayerSpec> build_layers(const RunConfig& cfg);

SweepConfig parse_sweep_config(const nlohmann::json& doc);
nlohmann::json to_json(const SweepConfig& cfg);

}  // namespace oversmooth
