// Command-line front end: spectrum, energy, run, verify, sweep.
//
// Exit codes: 0 success (verdicts are data), 2 input error, 3 numeric error.

#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "oversmooth/bounds.hpp"
#include "oversmooth/energy.hpp"
#include "oversmooth/errors.hpp"
#include "oversmooth/experiments.hpp"
#include "oversmooth/gcn.hpp"
#include "oversmooth/generators.hpp"
#include "oversmooth/io.hpp"
#include "oversmooth/rng.hpp"
#include "oversmooth/spectral.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace oversmooth;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

void emit(const std::string& out_path, const std::string& contents) {
  if (out_path.empty() || out_path == "-") {
    std::cout << contents;
  } else {
    write_file(out_path, contents);
  }
}

json load_json(const std::string& path) {
  try {
    return json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

struct SpectrumArgs {
  std::string graph;
  std::string out;
};

int cmd_spectrum(const SpectrumArgs& a) {
  const Graph g = load_graph(a.graph);
  const SpectralContext ctx = SpectralContext::of(g);
  const Spectrum& s = ctx.spectrum;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double lam = s.eigenvalues(i);
    if (lam < -1e-10 || lam >= 2.0) {
      std::cerr << "warning: eigenvalue " << format_double(lam) << " lies outside [0, 2)\n";
    }
  }

  const json resolved{{"command", "spectrum"}, {"graph", a.graph}, {"zero_tol", s.zero_tol}};
  std::string body = output_header(resolved, 0) + spectrum_csv(s);
  std::ostringstream summary;
  int code = kExitOk;
  try {
    const ContractionFactors cf = contraction_factors(s);
    summary << "lambda_min_nonzero=" << format_double(cf.lambda_min_nonzero)
            << " lambda_bar_paper=" << format_double(cf.lambda_bar_paper)
            << " lambda_bar_safe=" << format_double(cf.lambda_bar_safe) << " kernel_dim=" << cf.kernel_dim;
  } catch (const DegenerateSpectrumError& e) {
    summary << "contraction factors undefined: " << e.what() << " kernel_dim=" << s.kernel_dim();
    code = kExitNumeric;
  }
  body += "# " + summary.str() + "\n";
  emit(a.out, body);
  if (!a.out.empty() && a.out != "-") std::cout << summary.str() << "\n";
  return code;
}

// ---------------------------------------------------------------------------

struct EnergyArgs {
  std::string graph;
  std::string features;
  Eigen::Index channels = 4;
  std::uint64_t seed = 0;
  std::string out;
};

int cmd_energy(const EnergyArgs& a) {
  const Graph g = load_graph(a.graph);
  const EmbeddingMatrix x = a.features.empty()
                                ? gaussian_matrix(static_cast<Eigen::Index>(g.num_nodes()), a.channels, a.seed)
                                : read_matrix_csv(read_file(a.features));
  if (a.channels < 1) throw ValidationError("--channels must be >= 1");
  const SymMatrix lap = augmented_normalized_laplacian(g);
  const double trace = dirichlet_energy_trace(x, lap);
  const double edges = dirichlet_energy_edge_sum(x, g);
  const std::string rq = x.squaredNorm() > 0.0 ? format_double(rayleigh_quotient(x, lap)) : "";

  json resolved{{"command", "energy"}, {"graph", a.graph}};
  if (a.features.empty()) {
    resolved["channels"] = a.channels;
  } else {
    resolved["features"] = a.features;
  }
  std::ostringstream body;
  body << output_header(resolved, a.seed) << "energy_trace,energy_edge_sum,rayleigh\n"
       << format_double(trace) << ',' << format_double(edges) << ',' << rq << '\n';
  emit(a.out, body.str());
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct RunArgs {
  std::string config;
  std::string out;
  std::string mode;
};

int cmd_run(const RunArgs& a) {
  RunConfig cfg = parse_run_config(load_json(a.config));
  if (a.mode == "prop71") cfg.mode = RunMode::Prop71;
  if (a.mode == "standard") cfg.mode = RunMode::Standard;

  const Graph g = load_graph(cfg.graph_source);
  const auto n = static_cast<Eigen::Index>(g.num_nodes());
  EmbeddingMatrix x0 = cfg.features_path ? read_matrix_csv(read_file(*cfg.features_path))
                                         : gaussian_matrix(n, cfg.input_channels, derive_seed(cfg.seed, {0xF0}));
  if (cfg.features_path && x0.cols() != cfg.input_channels) {
    throw ValidationError("features file has " + std::to_string(x0.cols()) + " columns but input_channels is " +
                          std::to_string(cfg.input_channels));
  }
  const std::vector<LayerSpec> layers = build_layers(cfg);
  const std::string header = output_header(to_json(cfg), cfg.seed);

  if (cfg.mode == RunMode::Prop71) {
    const Prop71Result res = verify_prop_7_1(g, layers, x0, cfg.epsilon, cfg.placement);
    emit(a.out, header + trajectory_csv(res.trajectory));
    std::cout << "prop71 verdict: " << verdict_name(res.verdict);
    if (!res.reason.empty()) std::cout << " (" << res.reason << ")";
    if (res.witness) std::cout << " witness=" << format_double(*res.witness);
    std::cout << "\n";
    if (res.verdict != Prop71Verdict::PreconditionFailed) {
      std::cout << "global decay check: E=" << format_double(res.global.lhs)
                << " bound=" << format_double(res.global.rhs_paper) << " (" << res.global.context << ")\n";
    }
    return kExitOk;
  }

  const SpectralContext ctx = SpectralContext::of(g);
  const Trajectory traj = run_network(x0, layers, ctx, cfg.placement);
  emit(a.out, header + trajectory_csv(traj));

  const double e0 = traj.records.front().energy;
  const double el = traj.records.back().energy;
  std::cout << "layers=" << layers.size() << " s=" << format_double(traj.sup_gain)
            << " rho_safe=" << format_double(traj.sup_bound_safe);
  if (e0 > 0.0) std::cout << " final/initial=" << format_double(el / e0);
  std::cout << "\n";
  if (ctx.spectrum.kernel_dim() == ctx.spectrum.size()) {
    std::cout << "contraction factors undefined (graph has no edges)\n";
    return kExitOk;
  }
  const bool contracting = traj.sup_bound_safe < 1.0;
  std::cout << "s*lambda_bar < 1: " << (contracting ? "yes" : "no") << "\n";
  if (contracting) {
    const DecayReport d = verify_corollary_3_5(traj);
    std::cout << "fitted log-energy slope=" << format_optional(d.slope)
              << " limit=" << format_double(d.slope_limit) << " decay bound "
              << (d.report.holds() ? "holds" : "VIOLATED") << "\n";
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
  std::string suite = "all";
  std::size_t trials = 100;
  std::uint64_t seed = 0;
  std::string out = "verify_out";
};

int cmd_verify(const VerifyArgs& a) {
  if (a.trials < 1) throw ValidationError("--trials must be >= 1");
  std::vector<Statement> statements;
  if (a.suite == "all") {
    statements = all_statements();
  } else if (auto s = parse_suite(a.suite)) {
    statements.push_back(*s);
  } else {
    throw ValidationError("unknown suite '" + a.suite + "'");
  }

  fs::create_directories(a.out);
  std::vector<SuiteSummary> summaries;
  bool all_pass = true;
  for (Statement s : statements) {
    const SuiteResult res = run_suite(s, a.trials, a.seed);
    const json resolved{{"command", "verify"}, {"suite", suite_name(s)}, {"trials", a.trials}};
    write_file((fs::path(a.out) / (std::string(suite_name(s)) + ".csv")).string(),
               output_header(resolved, a.seed) + bound_reports_csv(res.trials));
    if (!res.summary.counterexample_seeds.empty()) {
      const fs::path dir = fs::path(a.out) / "counterexamples";
      fs::create_directories(dir);
      for (const auto& t : res.trials) {
        const bool violated = std::any_of(t.reports.begin(), t.reports.end(),
                                          [](const BoundReport& r) { return r.paper_violation(); });
        if (!violated) continue;
        std::ostringstream fixture;
        fixture << "# statement " << statement_id(s) << " trial_seed " << t.seed << " instance_seed "
                << t.instance.seed << " " << t.instance.description << "\n"
                << to_edge_list(t.instance.graph);
        write_file((dir / (std::string(suite_name(s)) + "_" + std::to_string(t.seed) + ".edges")).string(),
                   fixture.str());
      }
    }
    all_pass = all_pass && res.summary.failed == 0;
    std::cout << statement_id(s) << ": pass=" << res.summary.passed << " fail=" << res.summary.failed
              << " vacuous=" << res.summary.vacuous << " paper_violations=" << res.summary.paper_violations
              << " worst_margin=" << format_optional(res.summary.worst_margin) << "\n";
    summaries.push_back(res.summary);
  }
  const json resolved{{"command", "verify"}, {"suite", a.suite}, {"trials", a.trials}};
  write_file((fs::path(a.out) / "summary.txt").string(),
             output_header(resolved, a.seed) + suite_summary_text(summaries));
  return all_pass ? kExitOk : kExitNumeric;
}

// ---------------------------------------------------------------------------

struct SweepArgs {
  std::string config;
  std::string out;
};

int cmd_sweep(const SweepArgs& a) {
  const SweepConfig cfg = parse_sweep_config(load_json(a.config));
  const std::vector<SweepRow> rows = run_sweep(cfg);
  std::string header = output_header(to_json(cfg), cfg.base_seed);
  if (const auto* f = std::get_if<FixedFieldProbe>(&cfg.probe)) {
    header += "# probe: fixed_field channels=" + std::to_string(f->channels) + " seed=" + std::to_string(f->seed) +
              " (one Gaussian field per trial, same X before and after)\n";
  } else {
    header += "# probe: spectrum_only\n";
  }
  header += "# drop_selection: uniform\n";
  emit(a.out, header + sweep_csv(rows));

  if (!cfg.drop_ratios.empty() && !cfg.boost_counts.empty()) {
    const std::string table = duality_csv(duality_report(rows));
    if (a.out.empty() || a.out == "-") {
      std::cout << "\n" << table;
    } else {
      fs::path p(a.out);
      write_file((p.parent_path() / (p.stem().string() + "_duality.csv")).string(), header + table);
    }
  }
  for (const auto& st : drop_energy_stats(rows)) {
    std::cerr << "drop ratio " << format_double(st.drop_ratio) << ": energy increased in " << st.increased << "/"
              << st.rows << " trials (fraction " << format_double(st.fraction()) << ")";
    if (st.fraction() <= 0.5) std::cerr << " -- warning: not a majority";
    std::cerr << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dirichlet-energy over-smoothing toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  SpectrumArgs spectrum_args;
  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues of the augmented normalized Laplacian");
  spectrum->add_option("--graph", spectrum_args.graph, "Edge-list path or gen:<kind>:<args>")->required();
  spectrum->add_option("--out", spectrum_args.out, "CSV output path (stdout if omitted)");

  EnergyArgs energy_args;
  auto* energy = app.add_subcommand("energy", "Dirichlet energy of a feature matrix");
  energy->add_option("--graph", energy_args.graph, "Edge-list path or gen:<kind>:<args>")->required();
  energy->add_option("--features", energy_args.features, "CSV feature matrix (N rows)");
  energy->add_option("--channels", energy_args.channels, "Random Gaussian features with this many columns");
  energy->add_option("--seed", energy_args.seed, "Seed for random features");
  energy->add_option("--out", energy_args.out, "CSV output path (stdout if omitted)");

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate a deep GCN and record its energy trajectory");
  run->add_option("--config", run_args.config, "JSON run configuration")->required();
  run->add_option("--out", run_args.out, "Trajectory CSV path (stdout if omitted)");
  run->add_option("--mode", run_args.mode, "Override the config mode")
      ->check(CLI::IsMember({"standard", "prop71"}));

  VerifyArgs verify_args;
  auto* verify = app.add_subcommand("verify", "Check the contraction inequalities on random instances");
  verify->add_option("--suite", verify_args.suite, "l31, l32, l33, t34, c35, l72, p71 or all")
      ->check(CLI::IsMember({"l31", "l32", "l33", "t34", "c35", "l72", "p71", "all"}));
  verify->add_option("--trials", verify_args.trials, "Instances per statement");
  verify->add_option("--seed", verify_args.seed, "Base seed");
  verify->add_option("--out", verify_args.out, "Output directory");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Edge drop / weight boost sweep");
  sweep->add_option("--config", sweep_args.config, "JSON sweep configuration")->required();
  sweep->add_option("--out", sweep_args.out, "CSV output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    if (*spectrum) return cmd_spectrum(spectrum_args);
    if (*energy) return cmd_energy(energy_args);
    if (*run) return cmd_run(run_args);
    if (*verify) return cmd_verify(verify_args);
    if (*sweep) return cmd_sweep(sweep_args);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitInput;
}
