#include "oversmooth/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <sstream>

#include "oversmooth/errors.hpp"
#include "oversmooth/rng.hpp"

namespace oversmooth {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : ""; }

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string output_header(const json& resolved_config, std::uint64_t seed) {
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx",
                static_cast<unsigned long long>(fnv1a64(resolved_config.dump())));
  std::ostringstream os;
  os << "# oversmooth " << kToolVersion << "\n# config_hash: " << hash << "\n# seed: " << seed << "\n";
  return os.str();
}

std::string spectrum_csv(const Spectrum& s) {
  std::ostringstream os;
  os << "index,eigenvalue,is_zero\n";
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    os << i << ',' << format_double(s.eigenvalues(i)) << ',' << (s.is_zero(i) ? 1 : 0) << '\n';
  }
  return os.str();
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream os;
  os << "layer,energy,rayleigh,bound_paper,bound_safe,channels\n";
  for (const auto& r : t.records) {
    os << r.layer << ',' << format_double(r.energy) << ',' << format_optional(r.rayleigh) << ','
       << format_optional(r.bound_paper) << ',' << format_optional(r.bound_safe) << ',' << r.channels << '\n';
  }
  return os.str();
}

std::string bound_reports_csv(const std::vector<SuiteTrial>& trials) {
  std::ostringstream os;
  os << "trial_seed,statement,lhs,rhs_paper,rhs_safe,margin,holds_paper,holds_safe,vacuous,asserted,context\n";
  auto flag = [](bool b) { return b ? "1" : "0"; };
  for (const auto& t : trials) {
    for (const auto& r : t.reports) {
      std::string ctx = r.context;
      for (auto& c : ctx)
        if (c == ',' || c == '"' || c == '\n') c = ';';
      os << t.seed << ',' << statement_id(r.statement) << ',' << format_double(r.lhs) << ','
         << format_double(r.rhs_paper) << ',' << format_optional(r.rhs_safe) << ',' << format_double(r.margin)
         << ',' << flag(r.holds_paper) << ',' << (r.holds_safe ? flag(*r.holds_safe) : "") << ','
         << flag(r.vacuous) << ',' << flag(r.asserted) << ',' << ctx << '\n';
    }
  }
  return os.str();
}

std::string suite_summary_text(const std::vector<SuiteSummary>& summaries) {
  std::ostringstream os;
  for (const auto& s : summaries) {
    os << "statement: " << statement_id(s.statement) << '\n'
       << "  trials: " << s.trials << '\n'
       << "  pass: " << s.passed << '\n'
       << "  fail: " << s.failed << '\n'
       << "  vacuous: " << s.vacuous << '\n'
       << "  informational: " << s.informational << '\n'
       << "  precondition_failed: " << s.precondition_failed << '\n'
       << "  paper_bound_violations: " << s.paper_violations << '\n'
       << "  worst_margin: " << format_optional(s.worst_margin) << '\n';
    os << "  failure_seeds:";
    for (auto seed : s.failure_seeds) os << ' ' << seed;
    os << "\n  counterexample_seeds:";
    for (auto seed : s.counterexample_seeds) os << ' ' << seed;
    os << '\n';
  }
  return os.str();
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream os;
  os << kSweepHeader << '\n';
  for (const auto& r : rows) {
    os << r.trial << ',' << r.seed << ',' << (r.op == SweepOp::Drop ? "drop" : "boost") << ','
       << format_double(r.param) << ',' << r.edges_before << ',' << r.edges_after << ','
       << format_double(r.lambda_min_before) << ',' << format_double(r.lambda_min_after) << ','
       << format_double(r.lambda_bar_safe_before) << ',' << format_double(r.lambda_bar_safe_after) << ','
       << format_double(r.energy_before) << ',' << format_double(r.energy_after) << '\n';
  }
  return os.str();
}

std::string duality_csv(const std::vector<DualityEntry>& entries) {
  std::ostringstream os;
  os << "boost_count,drop_ratio,mean_lambda_distance,mean_energy_distance,trials_used\n";
  for (const auto& e : entries) {
    os << e.boost_count << ',' << format_double(e.drop_ratio) << ',' << format_double(e.mean_lambda_distance)
       << ',' << format_double(e.mean_energy_distance) << ',' << e.trials_used << '\n';
  }
  return os.str();
}

EmbeddingMatrix read_matrix_csv(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::vector<double> row;
    std::istringstream fields(line);
    std::string tok;
    while (std::getline(fields, tok, ',')) {
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || std::string_view(end).find_first_not_of(" \t") != std::string_view::npos ||
          !std::isfinite(v)) {
        throw ParseError("invalid number '" + tok + "'", line_no);
      }
      row.push_back(v);
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " columns, expected " +
                           std::to_string(rows.front().size()),
                       line_no);
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file is empty");
  EmbeddingMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw ValidationError("write to '" + path + "' failed");
}

// ---------------------------------------------------------------------------
// Configuration documents

namespace {

template <typename T>
T get_or(const json& doc, const char* key, T fallback) {
  if (!doc.contains(key)) return fallback;
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config key '") + key + "': " + e.what());
  }
}

template <typename T>
T require(const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(std::string("config is missing required key '") + key + "'");
  return get_or<T>(doc, key, T{});
}

LayerTemplate parse_layer(const json& doc, const LayerTemplate* base) {
  if (!doc.is_object()) throw ParseError("layer entry must be an object");
  LayerTemplate t = base ? *base : LayerTemplate{};
  if (doc.contains("filter")) t.filter = get_or<std::vector<double>>(doc, "filter", {});
  if (doc.contains("weights")) {
    t.weights.clear();
    for (const auto& w : doc.at("weights")) {
      WeightSpec ws;
      ws.cols = require<Eigen::Index>(w, "cols");
      ws.top_singular = get_or<double>(w, "top_singular", 1.0);
      if (ws.cols < 1) throw ValidationError("weight 'cols' must be >= 1");
      t.weights.push_back(ws);
    }
  }
  if (doc.contains("activation")) {
    const json& a = doc.at("activation");
    if (a.is_string()) {
      t.activation = parse_activation(a.get<std::string>());
    } else {
      t.activation = parse_activation(require<std::string>(a, "kind"), get_or<double>(a, "slope", 0.2));
    }
  }
  return t;
}

json layer_json(const LayerTemplate& t) {
  json ws = json::array();
  for (const auto& w : t.weights) ws.push_back({{"cols", w.cols}, {"top_singular", w.top_singular}});
  const std::string kind = t.activation.kind() == Activation::Kind::LeakyReLU ? "leaky_relu" : t.activation.name();
  json act{{"kind", kind}};
  if (t.activation.kind() == Activation::Kind::LeakyReLU) act["slope"] = t.activation.slope();
  return json{{"filter", t.filter}, {"weights", ws}, {"activation", act}};
}

}  // namespace

RunConfig parse_run_config(const json& doc) {
  if (!doc.is_object()) throw ParseError("run config must be a JSON object");
  RunConfig cfg;
  cfg.graph_source = require<std::string>(doc, "graph");
  cfg.seed = get_or<std::uint64_t>(doc, "seed", 0);
  cfg.input_channels = get_or<Eigen::Index>(doc, "input_channels", 4);
  if (doc.contains("features")) cfg.features_path = get_or<std::string>(doc, "features", "");
  if (cfg.input_channels < 1) throw ValidationError("input_channels must be >= 1");

  const auto placement = get_or<std::string>(doc, "activation_placement", "paper");
  if (placement == "paper") {
    cfg.placement = ActivationPlacement::Paper;
  } else if (placement == "conventional") {
    cfg.placement = ActivationPlacement::Conventional;
  } else {
    throw ValidationError("activation_placement must be 'paper' or 'conventional'");
  }

  const auto mode = get_or<std::string>(doc, "mode", "standard");
  if (mode == "standard") {
    cfg.mode = RunMode::Standard;
  } else if (mode == "prop71") {
    cfg.mode = RunMode::Prop71;
  } else {
    throw ValidationError("mode must be 'standard' or 'prop71'");
  }
  cfg.epsilon = get_or<double>(doc, "epsilon", 0.5);

  LayerTemplate base;
  if (doc.contains("layer_template")) base = parse_layer(doc.at("layer_template"), nullptr);
  if (doc.contains("layers")) {
    const json& ls = doc.at("layers");
    if (!ls.is_array()) throw ParseError("'layers' must be a list");
    for (const auto& l : ls) cfg.layers.push_back(parse_layer(l, &base));
  } else {
    const auto depth = get_or<std::int64_t>(doc, "depth", 0);
    if (depth < 0) throw ValidationError("depth must be >= 1");
    cfg.layers.assign(static_cast<std::size_t>(depth), base);
  }
  if (cfg.layers.empty()) throw ValidationError("network needs at least one layer (L >= 1)");

  // Default stack: one square weight with unit top singular value.
  Eigen::Index width = cfg.input_channels;
  for (auto& l : cfg.layers) {
    if (l.weights.empty()) l.weights.push_back({width, 1.0});
    width = l.weights.back().cols;
  }
  return cfg;
}

json to_json(const RunConfig& cfg) {
  json layers = json::array();
  for (const auto& l : cfg.layers) layers.push_back(layer_json(l));
  json doc{{"graph", cfg.graph_source},
           {"seed", cfg.seed},
           {"input_channels", cfg.input_channels},
           {"activation_placement", cfg.placement == ActivationPlacement::Paper ? "paper" : "conventional"},
           {"mode", cfg.mode == RunMode::Prop71 ? "prop71" : "standard"},
           {"epsilon", cfg.epsilon},
           {"layers", layers}};
  if (cfg.features_path) doc["features"] = *cfg.features_path;
  return doc;
}

std::vector<LayerSpec> build_layers(const RunConfig& cfg) {
  std::vector<LayerSpec> out;
  Eigen::Index width = cfg.input_channels;
  for (std::size_t l = 0; l < cfg.layers.size(); ++l) {
    const LayerTemplate& t = cfg.layers[l];
    LayerSpec spec;
    spec.filter = PolynomialFilter(t.filter);
    spec.activation = t.activation;
    for (std::size_t h = 0; h < t.weights.size(); ++h) {
      spec.weights.push_back(
          make_weights(width, t.weights[h].cols, t.weights[h].top_singular, derive_seed(cfg.seed, {l, h})));
      width = t.weights[h].cols;
    }
    out.push_back(std::move(spec));
  }
  return out;
}

SweepConfig parse_sweep_config(const json& doc) {
  if (!doc.is_object()) throw ParseError("sweep config must be a JSON object");
  SweepConfig cfg;
  cfg.graph_source = require<std::string>(doc, "graph");
  cfg.drop_ratios = get_or<std::vector<double>>(doc, "drop_ratios", {});
  cfg.boost_counts = get_or<std::vector<std::size_t>>(doc, "boost_counts", {});
  cfg.boost_factor = get_or<double>(doc, "boost_factor", 10000.0);
  cfg.trials = get_or<std::size_t>(doc, "trials", 1);
  cfg.base_seed = get_or<std::uint64_t>(doc, "base_seed", 0);
  if (doc.contains("probe")) {
    const json& p = doc.at("probe");
    const auto kind = require<std::string>(p, "kind");
    if (kind == "fixed_field") {
      cfg.probe = FixedFieldProbe{get_or<Eigen::Index>(p, "channels", 4), get_or<std::uint64_t>(p, "seed", 0)};
    } else if (kind == "spectrum_only") {
      cfg.probe = SpectrumOnlyProbe{};
    } else {
      throw ValidationError("probe kind must be 'fixed_field' or 'spectrum_only'");
    }
  }
  cfg.validate();
  return cfg;
}

json to_json(const SweepConfig& cfg) {
  json probe;
  if (const auto* f = std::get_if<FixedFieldProbe>(&cfg.probe)) {
    probe = {{"kind", "fixed_field"}, {"channels", f->channels}, {"seed", f->seed}};
  } else {
    probe = {{"kind", "spectrum_only"}};
  }
  return json{{"graph", cfg.graph_source},        {"drop_ratios", cfg.drop_ratios},
              {"boost_counts", cfg.boost_counts}, {"boost_factor", cfg.boost_factor},
              {"trials", cfg.trials},             {"base_seed", cfg.base_seed},
              {"probe", probe},                   {"drop_selection", "uniform"}};
}

}  // namespace oversmooth
