#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oversmooth/energy.hpp"
#include "oversmooth/gcn.hpp"
#include "oversmooth/graph.hpp"
#include "oversmooth/spectral.hpp"

namespace oversmooth {

enum class Statement { L31, L32, L33, T34, C35, L72, P71 };

std::string_view statement_id(Statement s);  // "L3.1", ...
std::string_view suite_name(Statement s);    // "l31", ...
std::optional<Statement> parse_suite(std::string_view name);
const std::vector<Statement>& all_statements();

// Shared pass threshold: lhs <= rhs * (1 + rel) + abs.
constexpr double kRelTol = 1e-9;
constexpr double kAbsTol = 1e-12;
constexpr double kDecayTol = 1e-6;

inline bool within_bound(double lhs, double rhs, double rel = kRelTol) {
  return lhs <= rhs * (1.0 + rel) + kAbsTol;
}

struct BoundReport {
  Statement statement = Statement::L31;
  double lhs = 0.0;
  double rhs_paper = 0.0;
  std::optional<double> rhs_safe;
  double margin = 0.0;  // (rhs_safe or rhs_paper) - lhs
  bool holds_paper = false;
  std::optional<bool> holds_safe;
  bool vacuous = false;   // E(X) numerically zero
  bool asserted = true;   // false: informational only (e.g. Tanh on a non-regular graph)
  bool precondition_failed = false;
  std::string context;

  // Verdict used for pass/fail accounting: the safe bound when present.
  bool holds() const { return holds_safe.value_or(holds_paper); }
  bool paper_violation() const { return holds() && !holds_paper; }
};

// Fills margin and both holds flags from lhs and the right-hand sides.
BoundReport make_report(Statement s, double lhs, double rhs_paper, std::optional<double> rhs_safe,
                        std::string context, double rel = kRelTol);

// E(X) small enough that the inequality is vacuous.
bool is_vacuous_energy(double energy, const EmbeddingMatrix& x);

BoundReport verify_lemma_3_1(const Graph& g, const EmbeddingMatrix& x);
BoundReport verify_lemma_3_2(const EmbeddingMatrix& x, const Eigen::MatrixXd& w, const SymMatrix& lap);
BoundReport verify_lemma_3_3(const Graph& g, const EmbeddingMatrix& x, const Activation& act);
BoundReport verify_theorem_3_4(const Graph& g, const EmbeddingMatrix& x, const LayerSpec& spec,
                               ActivationPlacement placement = ActivationPlacement::Paper);
BoundReport verify_lemma_7_2(const Graph& g, const EmbeddingMatrix& x, const PolynomialFilter& f);

struct DecayReport {
  BoundReport report;        // lhs = E(X^(L)), rhs_safe = rho^L E(X^(0))
  double rho = 0.0;          // max per-layer safe factor
  double bound_product = 0.0;  // product of per-layer safe factors
  std::optional<double> slope;  // least-squares slope of log E over layers
  double slope_limit = 0.0;     // log(rho) + 1e-6
  bool slope_ok = true;
};

// Throws PreconditionError when rho >= 1.
DecayReport verify_corollary_3_5(const Trajectory& traj);

enum class Prop71Verdict { Holds, Violated, PreconditionFailed };

struct Prop71Result {
  Prop71Verdict verdict = Prop71Verdict::Holds;
  std::string reason;
  std::optional<double> witness;       // non-monotone filter witness
  std::optional<std::size_t> layer;    // offending layer for a precondition failure
  std::vector<BoundReport> layer_reports;
  BoundReport global;                  // worst-case over l of E(X^(l)) vs (1-eps)^l E(X^(0))
  Trajectory trajectory;
};

// Gate: every filter monotone decreasing on [0, lambda_max] and
// s_l^2 P_l(lambda_i)^2 < 1 - eps for every nonzero eigenvalue. A failed gate
// is returned as a verdict, never thrown.
Prop71Result verify_prop_7_1(const Graph& g, const std::vector<LayerSpec>& layers,
                             const EmbeddingMatrix& x0, double epsilon,
                             ActivationPlacement placement = ActivationPlacement::Paper);

std::string_view verdict_name(Prop71Verdict v);

// ---------------------------------------------------------------------------
// Randomized suites

struct Instance {
  std::uint64_t seed = 0;
  std::string description;
  Graph graph{1, {}};
  EmbeddingMatrix x;
};

// Random graph (ER n in [5,60] p in [0.05,0.5], Ring, KRegular, Path; about a
// quarter of them with a few boosted weights) and Gaussian X with C in [1,8].
// When `need_edge` is set the graph is resampled until it has an edge.
Instance sample_instance(std::uint64_t seed, bool need_edge = true);

struct SuiteSummary {
  Statement statement = Statement::L31;
  std::size_t trials = 0;
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t vacuous = 0;
  std::size_t informational = 0;
  std::size_t precondition_failed = 0;
  std::size_t paper_violations = 0;
  std::optional<double> worst_margin;  // over asserted, non-vacuous reports
  std::vector<std::uint64_t> failure_seeds;
  std::vector<std::uint64_t> counterexample_seeds;  // paper-bound violations
};

struct SuiteTrial {
  std::uint64_t seed = 0;
  Instance instance;
  std::vector<BoundReport> reports;
};

struct SuiteResult {
  SuiteSummary summary;
  std::vector<SuiteTrial> trials;
};

SuiteResult run_suite(Statement s, std::size_t trials, std::uint64_t seed);

}  // namespace oversmooth
