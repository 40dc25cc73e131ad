#include "oversmooth/bounds.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

#include "oversmooth/errors.hpp"
#include "oversmooth/generators.hpp"
#include "oversmooth/rng.hpp"

namespace oversmooth {

namespace {

struct StatementInfo {
  Statement s;
  std::string_view id;
  std::string_view suite;
};

constexpr std::array<StatementInfo, 7> kStatements{{
    {Statement::L31, "L3.1", "l31"},
    {Statement::L32, "L3.2", "l32"},
    {Statement::L33, "L3.3", "l33"},
    {Statement::T34, "T3.4", "t34"},
    {Statement::C35, "C3.5", "c35"},
    {Statement::L72, "L7.2", "l72"},
    {Statement::P71, "P7.1", "p71"},
}};

const StatementInfo& info(Statement s) {
  for (const auto& i : kStatements)
    if (i.s == s) return i;
  return kStatements[0];
}

// Energy of an output signal that is zero up to round-off.
double roundoff_floor(const EmbeddingMatrix& y) { return kAbsTol * std::max(1.0, y.squaredNorm()); }

void mark_vacuous(BoundReport& r, const EmbeddingMatrix& output) {
  r.vacuous = true;
  const bool ok = r.lhs <= roundoff_floor(output);
  r.holds_paper = ok;
  if (r.rhs_safe) r.holds_safe = ok;
}

}  // namespace

std::string_view statement_id(Statement s) { return info(s).id; }
std::string_view suite_name(Statement s) { return info(s).suite; }

std::optional<Statement> parse_suite(std::string_view name) {
  for (const auto& i : kStatements)
    if (i.suite == name) return i.s;
  return std::nullopt;
}

const std::vector<Statement>& all_statements() {
  static const std::vector<Statement> all{Statement::L31, Statement::L32, Statement::L33, Statement::T34,
                                          Statement::C35, Statement::L72, Statement::P71};
  return all;
}

BoundReport make_report(Statement s, double lhs, double rhs_paper, std::optional<double> rhs_safe,
                        std::string context, double rel) {
  BoundReport r;
  r.statement = s;
  r.lhs = lhs;
  r.rhs_paper = rhs_paper;
  r.rhs_safe = rhs_safe;
  r.margin = rhs_safe.value_or(rhs_paper) - lhs;
  r.holds_paper = within_bound(lhs, rhs_paper, rel);
  if (rhs_safe) r.holds_safe = within_bound(lhs, *rhs_safe, rel);
  r.context = std::move(context);
  return r;
}

bool is_vacuous_energy(double energy, const EmbeddingMatrix& x) { return energy <= roundoff_floor(x); }

BoundReport verify_lemma_3_1(const Graph& g, const EmbeddingMatrix& x) {
  const SpectralContext ctx = SpectralContext::of(g);
  const ContractionFactors cf = contraction_factors(ctx.spectrum);
  const double e = dirichlet_energy_edge_sum(x, g);
  const EmbeddingMatrix px = propagation_matrix(g).matrix() * x;
  const double lhs = dirichlet_energy_edge_sum(px, g);
  auto r = make_report(Statement::L31, lhs, cf.lambda_bar_paper * e, cf.lambda_bar_safe * e, "");
  if (is_vacuous_energy(e, x)) mark_vacuous(r, px);
  return r;
}

BoundReport verify_lemma_3_2(const EmbeddingMatrix& x, const Eigen::MatrixXd& w, const SymMatrix& lap) {
  if (x.cols() != w.rows()) {
    throw ValidationError("X has " + std::to_string(x.cols()) + " channels but W has " + std::to_string(w.rows()) +
                          " rows");
  }
  const double e = dirichlet_energy_trace(x, lap);
  const EmbeddingMatrix xw = x * w;
  const double s = top_singular_value(w);
  auto r = make_report(Statement::L32, dirichlet_energy_trace(xw, lap), s * s * e, std::nullopt, "");
  if (is_vacuous_energy(e, x)) mark_vacuous(r, xw);
  return r;
}

BoundReport verify_lemma_3_3(const Graph& g, const EmbeddingMatrix& x, const Activation& act) {
  const SymMatrix lap = augmented_normalized_laplacian(g);
  const double e = dirichlet_energy_trace(x, lap);
  const EmbeddingMatrix sx = apply_activation(x, act);
  const bool regular = is_regular(g);
  auto r = make_report(Statement::L33, dirichlet_energy_trace(sx, lap), e, std::nullopt,
                       act.name() + (regular ? " regular" : ""));
  r.asserted = act.is_relu_family() || act.kind() == Activation::Kind::Identity || regular;
  if (is_vacuous_energy(e, x)) mark_vacuous(r, sx);
  return r;
}

BoundReport verify_theorem_3_4(const Graph& g, const EmbeddingMatrix& x, const LayerSpec& spec,
                               ActivationPlacement placement) {
  const SpectralContext ctx = SpectralContext::of(g);
  const FilterContraction fc = filter_contraction(spec.filter, ctx.spectrum);
  const double e = dirichlet_energy_edge_sum(x, g);
  const EmbeddingMatrix y = layer_forward(x, spec, ctx.spectrum, placement);
  const double s = spec.gain();
  auto r = make_report(Statement::T34, dirichlet_energy_edge_sum(y, g), s * fc.paper * e,
                       s * s * fc.safe * e, spec.activation.name());
  r.asserted = spec.activation.is_relu_family() || spec.activation.kind() == Activation::Kind::Identity ||
               is_regular(g);
  if (is_vacuous_energy(e, x)) mark_vacuous(r, y);
  return r;
}

BoundReport verify_lemma_7_2(const Graph& g, const EmbeddingMatrix& x, const PolynomialFilter& f) {
  const SpectralContext ctx = SpectralContext::of(g);
  const FilterContraction fc = filter_contraction(f, ctx.spectrum);
  const double e = dirichlet_energy_edge_sum(x, g);
  const EmbeddingMatrix y = eval_filter_matrix(f, ctx.spectrum).matrix() * x;
  auto r = make_report(Statement::L72, dirichlet_energy_edge_sum(y, g), fc.paper * e, fc.safe * e, "");
  if (is_vacuous_energy(e, x)) mark_vacuous(r, y);
  return r;
}

DecayReport verify_corollary_3_5(const Trajectory& traj) {
  if (traj.records.size() < 2) throw PreconditionError("trajectory needs at least one layer");
  DecayReport out;
  out.rho = 0.0;
  out.bound_product = 1.0;
  double paper_product = 1.0;
  for (std::size_t l = 1; l < traj.records.size(); ++l) {
    const auto& rec = traj.records[l];
    if (!rec.bound_safe || !rec.bound_paper) {
      throw PreconditionError("layer " + std::to_string(l) + " has no contraction factor (degenerate spectrum)");
    }
    out.rho = std::max(out.rho, *rec.bound_safe);
    out.bound_product *= *rec.bound_safe;
    paper_product *= *rec.bound_paper;
  }
  if (!(out.rho < 1.0)) {
    throw PreconditionError("per-layer factor rho = " + std::to_string(out.rho) + " is not below 1");
  }

  const std::size_t depth = traj.records.size() - 1;
  const double e0 = traj.records.front().energy;
  const double el = traj.records.back().energy;
  const double rho_pow = std::pow(out.rho, static_cast<double>(depth));

  std::ostringstream ctx;
  ctx << "L=" << depth << " rho=" << out.rho;
  out.report = make_report(Statement::C35, el, paper_product * e0, rho_pow * e0, ctx.str(), kDecayTol);

  // Least-squares slope of log E over the leading run of positive energies.
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& rec : traj.records) {
    if (!(rec.energy > 1e-300)) break;
    xs.push_back(static_cast<double>(rec.layer));
    ys.push_back(std::log(rec.energy));
  }
  out.slope_limit = out.rho > 0.0 ? std::log(out.rho) + kDecayTol : -std::numeric_limits<double>::infinity();
  if (xs.size() >= 2 && out.rho > 0.0) {
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      mx += xs[i];
      my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.slope = sxy / sxx;
    out.slope_ok = *out.slope <= out.slope_limit;
  }

  const bool product_ok = within_bound(el, out.bound_product * e0, kDecayTol);
  out.report.holds_safe = *out.report.holds_safe && out.slope_ok && product_ok;
  if (e0 <= kAbsTol * std::max(1.0, traj.records.front().squared_norm)) {
    out.report.vacuous = true;
    out.report.holds_paper = el <= kAbsTol * std::max(1.0, traj.records.back().squared_norm);
    out.report.holds_safe = out.report.holds_paper;
  }
  return out;
}

std::string_view verdict_name(Prop71Verdict v) {
  switch (v) {
    case Prop71Verdict::Holds:
      return "holds";
    case Prop71Verdict::Violated:
      return "violated";
    case Prop71Verdict::PreconditionFailed:
      return "precondition-failed";
  }
  return "?";
}

Prop71Result verify_prop_7_1(const Graph& g, const std::vector<LayerSpec>& layers, const EmbeddingMatrix& x0,
                             double epsilon, ActivationPlacement placement) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw ValidationError("epsilon must lie strictly inside (0, 1)");
  if (layers.empty()) throw ValidationError("network needs at least one layer");

  Prop71Result res;
  res.global.statement = Statement::P71;
  const SpectralContext ctx = SpectralContext::of(g);
  const Spectrum& spec = ctx.spectrum;
  if (spec.kernel_dim() == spec.size()) {
    res.verdict = Prop71Verdict::PreconditionFailed;
    res.reason = "spectrum has no nonzero eigenvalue";
    res.global.precondition_failed = true;
    return res;
  }
  const double lambda_max = spec.eigenvalues.maxCoeff();

  for (std::size_t l = 0; l < layers.size(); ++l) {
    layers[l].validate();
    const auto mono = check_monotone_decreasing(layers[l].filter, 0.0, lambda_max);
    if (!mono.decreasing) {
      std::ostringstream os;
      os << "layer " << l + 1 << " filter is not monotonically decreasing on [0, " << lambda_max
         << "]: P'(" << *mono.witness << ") > 0";
      res.verdict = Prop71Verdict::PreconditionFailed;
      res.reason = os.str();
      res.witness = mono.witness;
      res.layer = l + 1;
      res.global.precondition_failed = true;
      return res;
    }
    const double s = layers[l].gain();
    for (Eigen::Index i = 0; i < spec.size(); ++i) {
      if (spec.is_zero(i)) continue;
      const double p = layers[l].filter(spec.eigenvalues(i));
      if (!(s * s * p * p < 1.0 - epsilon)) {
        std::ostringstream os;
        os << "layer " << l + 1 << ": s_l^2 P_l(lambda)^2 = " << s * s * p * p << " at lambda = "
           << spec.eigenvalues(i) << " is not below 1 - eps = " << 1.0 - epsilon;
        res.verdict = Prop71Verdict::PreconditionFailed;
        res.reason = os.str();
        res.layer = l + 1;
        res.global.precondition_failed = true;
        return res;
      }
    }
  }

  res.trajectory = run_network(x0, layers, ctx, placement);
  const auto& recs = res.trajectory.records;
  bool all_ok = true;
  for (std::size_t l = 1; l < recs.size(); ++l) {
    const auto& prev = recs[l - 1];
    const auto& cur = recs[l];
    const double s = *cur.gain;
    const FilterContraction fc = filter_contraction(layers[l - 1].filter, spec);
    auto r = make_report(Statement::P71, cur.energy, s * fc.paper * prev.energy, s * s * fc.safe * prev.energy,
                         "layer " + std::to_string(l));
    if (prev.energy <= kAbsTol * std::max(1.0, prev.squared_norm)) {
      r.vacuous = true;
      r.holds_paper = cur.energy <= kAbsTol * std::max(1.0, cur.squared_norm);
      r.holds_safe = r.holds_paper;
    }
    all_ok = all_ok && r.holds();
    res.layer_reports.push_back(std::move(r));
  }

  // Worst layer relative to (1 - eps)^l E(X^(0)).
  const double e0 = recs.front().energy;
  std::size_t worst = 1;
  double worst_ratio = -1.0;
  for (std::size_t l = 1; l < recs.size(); ++l) {
    const double rhs = std::pow(1.0 - epsilon, static_cast<double>(l)) * e0;
    const double ratio = rhs > 0.0 ? recs[l].energy / rhs : (recs[l].energy > 0.0 ? 1e300 : 0.0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      worst = l;
    }
  }
  const double rhs = std::pow(1.0 - epsilon, static_cast<double>(worst)) * e0;
  res.global = make_report(Statement::P71, recs[worst].energy, rhs, rhs, "global l=" + std::to_string(worst),
                           kDecayTol);
  if (e0 <= kAbsTol * std::max(1.0, recs.front().squared_norm)) {
    res.global.vacuous = true;
    res.global.holds_paper = recs[worst].energy <= kAbsTol * std::max(1.0, recs[worst].squared_norm);
    res.global.holds_safe = res.global.holds_paper;
  }
  all_ok = all_ok && res.global.holds();
  res.verdict = all_ok ? Prop71Verdict::Holds : Prop71Verdict::Violated;
  return res;
}

// ---------------------------------------------------------------------------
// Randomized suites

namespace {

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t uniform_int(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Graph random_graph(Rng& rng, std::uint64_t seed, std::string& desc) {
  std::ostringstream os;
  Graph g(1, {});
  switch (uniform_int(rng, 0, 3)) {
    case 0: {
      const auto n = uniform_int(rng, 5, 60);
      const double p = uniform(rng, 0.05, 0.5);
      g = generate(gen::ErdosRenyi{n, p}, derive_seed(seed, {0xE7}));
      os << "er(" << n << "," << p << ")";
      break;
    }
    case 1: {
      const auto n = uniform_int(rng, 3, 60);
      g = generate(gen::Ring{n}, 0);
      os << "ring(" << n << ")";
      break;
    }
    case 2: {
      const auto n = uniform_int(rng, 5, 60);
      const auto k = 2 * uniform_int(rng, 1, (n - 1) / 2);
      g = generate(gen::KRegular{n, k}, 0);
      os << "kregular(" << n << "," << k << ")";
      break;
    }
    default: {
      const auto n = uniform_int(rng, 2, 60);
      g = generate(gen::Path{n}, 0);
      os << "path(" << n << ")";
      break;
    }
  }
  if (g.num_edges() > 0 && uniform(rng, 0.0, 1.0) < 0.25) {
    const auto k = uniform_int(rng, 1, std::min<std::size_t>(3, g.num_edges()));
    const double factor = std::exp(uniform(rng, std::log(10.0), std::log(10000.0)));
    g = perturb(g, PerturbationPlan::boost(k, factor, derive_seed(seed, {0xB0})));
    os << "+boost(" << k << "x" << factor << ")";
  }
  desc = os.str();
  return g;
}

EmbeddingMatrix random_signal(Rng& rng, Eigen::Index n, std::uint64_t seed) {
  const auto c = static_cast<Eigen::Index>(uniform_int(rng, 1, 8));
  EmbeddingMatrix x = gaussian_matrix(n, c, derive_seed(seed, {0x5A}));
  x *= std::exp(uniform(rng, std::log(0.1), std::log(10.0)));
  if (uniform(rng, 0.0, 1.0) < 0.5) {
    const Eigen::RowVectorXd offset = gaussian_matrix(1, c, derive_seed(seed, {0x0F}));
    x.rowwise() += offset;
  }
  return x;
}

// Regular graph with every weight scaled by one factor; stays regular.
Instance sample_regular_instance(std::uint64_t seed) {
  Rng rng(seed);
  Instance inst;
  inst.seed = seed;
  const auto n = uniform_int(rng, 5, 60);
  const auto k = 2 * uniform_int(rng, 1, (n - 1) / 2);
  Graph g = generate(gen::KRegular{n, k}, 0);
  const double scale = std::exp(uniform(rng, std::log(0.1), std::log(100.0)));
  std::vector<Edge> edges = g.edges();
  for (auto& e : edges) e.w *= scale;
  inst.graph = Graph(n, std::move(edges));
  std::ostringstream os;
  os << "kregular(" << n << "," << k << ")*" << scale;
  inst.description = os.str();
  inst.x = random_signal(rng, static_cast<Eigen::Index>(n), seed);
  return inst;
}

std::vector<Eigen::MatrixXd> random_chain(Rng& rng, Eigen::Index in, std::size_t h, double total_gain,
                                          std::uint64_t seed) {
  std::vector<Eigen::MatrixXd> ws;
  double remaining = total_gain;
  for (std::size_t i = 0; i < h; ++i) {
    const auto out = static_cast<Eigen::Index>(uniform_int(rng, 1, 8));
    const double target = i + 1 == h ? remaining : uniform(rng, 0.5, 1.5);
    remaining /= target;
    ws.push_back(make_weights(in, out, target, derive_seed(seed, {0x77, i})));
    in = out;
  }
  return ws;
}

Activation random_relu_family(Rng& rng) {
  switch (uniform_int(rng, 0, 3)) {
    case 0:
      return Activation::relu();
    case 1:
      return Activation::leaky_relu(0.01);
    case 2:
      return Activation::leaky_relu(0.2);
    default:
      return Activation::leaky_relu(0.5);
  }
}

// c * (1 - x/2)^k, decreasing on [0, 2].
PolynomialFilter decreasing_filter(std::size_t k, double c) {
  std::vector<double> coeffs{1.0};
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<double> next(coeffs.size() + 1, 0.0);
    for (std::size_t j = 0; j < coeffs.size(); ++j) {
      next[j] += coeffs[j];
      next[j + 1] -= 0.5 * coeffs[j];
    }
    coeffs = std::move(next);
  }
  for (auto& a : coeffs) a *= c;
  return PolynomialFilter(std::move(coeffs));
}

std::string fmt_context(const Instance& inst, const std::string& extra) {
  std::ostringstream os;
  os << "seed=" << inst.seed << " " << inst.description << " C=" << inst.x.cols();
  if (!extra.empty()) os << " " << extra;
  return os.str();
}

void tag(BoundReport& r, const Instance& inst) { r.context = fmt_context(inst, r.context); }

SuiteTrial run_trial(Statement s, std::uint64_t seed) {
  SuiteTrial t;
  t.seed = seed;
  Rng rng(derive_seed(seed, {0xC0FFEE}));
  switch (s) {
    case Statement::L31: {
      t.instance = sample_instance(seed);
      t.reports.push_back(verify_lemma_3_1(t.instance.graph, t.instance.x));
      break;
    }
    case Statement::L32: {
      t.instance = sample_instance(seed, false);
      const auto out = static_cast<Eigen::Index>(uniform_int(rng, 1, 8));
      const double target = uniform(rng, 0.1, 3.0);
      const Eigen::MatrixXd w = make_weights(t.instance.x.cols(), out, target, derive_seed(seed, {0x32}));
      auto r = verify_lemma_3_2(t.instance.x, w, augmented_normalized_laplacian(t.instance.graph));
      r.context = std::to_string(w.rows()) + "x" + std::to_string(w.cols());
      t.reports.push_back(std::move(r));
      break;
    }
    case Statement::L33: {
      t.instance = sample_instance(seed, false);
      for (const auto& act : {Activation::relu(), Activation::leaky_relu(0.01), Activation::leaky_relu(0.2),
                              Activation::leaky_relu(0.5)}) {
        t.reports.push_back(verify_lemma_3_3(t.instance.graph, t.instance.x, act));
      }
      const Instance reg = sample_regular_instance(derive_seed(seed, {0x33}));
      for (const auto& act : {Activation::tanh(), Activation::sigmoid()}) {
        auto r = verify_lemma_3_3(reg.graph, reg.x, act);
        r.context = fmt_context(reg, r.context);
        t.reports.push_back(std::move(r));
      }
      break;
    }
    case Statement::T34: {
      t.instance = sample_instance(seed);
      LayerSpec spec;
      spec.activation = random_relu_family(rng);
      const auto h = uniform_int(rng, 1, 3);
      spec.weights = random_chain(rng, t.instance.x.cols(), h, uniform(rng, 0.25, 2.0), seed);
      const auto placement = seed % 2 == 0 ? ActivationPlacement::Paper : ActivationPlacement::Conventional;
      auto r = verify_theorem_3_4(t.instance.graph, t.instance.x, spec, placement);
      r.context += std::string(" H=") + std::to_string(h) +
                   (placement == ActivationPlacement::Paper ? " paper" : " conventional");
      t.reports.push_back(std::move(r));
      break;
    }
    case Statement::L72: {
      t.instance = sample_instance(seed);
      const auto k = uniform_int(rng, 0, 4);
      std::vector<double> coeffs(k + 1);
      for (auto& a : coeffs) a = uniform(rng, -1.5, 1.5);
      auto r = verify_lemma_7_2(t.instance.graph, t.instance.x, PolynomialFilter(coeffs));
      r.context = "deg=" + std::to_string(k);
      t.reports.push_back(std::move(r));
      break;
    }
    case Statement::C35: {
      // Resample until the safe factor is positive so rho is a genuine rate.
      ContractionFactors cf{};
      for (std::uint64_t attempt = 0;; ++attempt) {
        t.instance = sample_instance(derive_seed(seed, {attempt}));
        cf = contraction_factors(eigendecompose(augmented_normalized_laplacian(t.instance.graph)));
        if (cf.lambda_bar_safe > 1e-6) break;
      }
      const SpectralContext ctx = SpectralContext::of(t.instance.graph);
      const double rho = uniform(rng, 0.3, 0.95);
      const double gain = std::sqrt(rho / cf.lambda_bar_safe);
      constexpr std::size_t kDepth = 12;
      std::vector<LayerSpec> layers;
      Eigen::Index in = t.instance.x.cols();
      for (std::size_t l = 0; l < kDepth; ++l) {
        LayerSpec spec;
        spec.activation = random_relu_family(rng);
        spec.weights = random_chain(rng, in, uniform_int(rng, 1, 2), gain, derive_seed(seed, {0xC35, l}));
        in = spec.output_channels();
        layers.push_back(std::move(spec));
      }
      const auto traj = run_network(t.instance.x, layers, ctx);
      auto d = verify_corollary_3_5(traj);
      t.reports.push_back(std::move(d.report));
      break;
    }
    case Statement::P71: {
      t.instance = sample_instance(seed);
      const SpectralContext ctx = SpectralContext::of(t.instance.graph);
      const double eps = uniform(rng, 0.05, 0.5);
      constexpr std::size_t kDepth = 10;
      std::vector<LayerSpec> layers;
      Eigen::Index in = t.instance.x.cols();
      for (std::size_t l = 0; l < kDepth; ++l) {
        const auto k = uniform_int(rng, 1, 3);
        double worst = 0.0;
        for (Eigen::Index i = 0; i < ctx.spectrum.size(); ++i) {
          if (ctx.spectrum.is_zero(i)) continue;
          const double v = decreasing_filter(k, 1.0)(ctx.spectrum.eigenvalues(i));
          worst = std::max(worst, v * v);
        }
        const double s = uniform(rng, 0.5, 1.5);
        const double c = worst > 0.0 ? 0.95 * std::sqrt((1.0 - eps) / (s * s * worst)) : 1.0;
        LayerSpec spec;
        spec.filter = decreasing_filter(k, c);
        spec.activation = random_relu_family(rng);
        spec.weights = random_chain(rng, in, uniform_int(rng, 1, 2), s, derive_seed(seed, {0x71, l}));
        in = spec.output_channels();
        layers.push_back(std::move(spec));
      }
      auto res = verify_prop_7_1(t.instance.graph, layers, t.instance.x, eps);
      res.global.context += " eps=" + std::to_string(eps) + " " + std::string(verdict_name(res.verdict));
      if (res.verdict == Prop71Verdict::PreconditionFailed) res.global.context += " (" + res.reason + ")";
      t.reports.push_back(std::move(res.global));
      for (auto& r : res.layer_reports) t.reports.push_back(std::move(r));
      break;
    }
  }
  for (auto& r : t.reports) {
    if (r.context.rfind("seed=", 0) != 0) tag(r, t.instance);
  }
  return t;
}

}  // namespace

Instance sample_instance(std::uint64_t seed, bool need_edge) {
  for (std::uint64_t attempt = 0;; ++attempt) {
    const std::uint64_t s = attempt == 0 ? seed : derive_seed(seed, {attempt});
    Rng rng(s);
    Instance inst;
    inst.seed = seed;
    inst.graph = random_graph(rng, s, inst.description);
    if (need_edge && inst.graph.num_edges() == 0) continue;
    inst.x = random_signal(rng, static_cast<Eigen::Index>(inst.graph.num_nodes()), s);
    return inst;
  }
}

SuiteResult run_suite(Statement s, std::size_t trials, std::uint64_t seed) {
  SuiteResult res;
  res.summary.statement = s;
  res.summary.trials = trials;
  res.trials.reserve(trials);
  for (std::size_t i = 0; i < trials; ++i) {
    SuiteTrial t = run_trial(s, derive_seed(seed, {static_cast<std::uint64_t>(s), i}));
    bool failed = false;
    bool paper_violation = false;
    for (const auto& r : t.reports) {
      if (r.precondition_failed) {
        ++res.summary.precondition_failed;
        continue;
      }
      if (!r.asserted) {
        ++res.summary.informational;
        continue;
      }
      if (r.vacuous) ++res.summary.vacuous;
      if (r.holds()) {
        ++res.summary.passed;
      } else {
        ++res.summary.failed;
        failed = true;
      }
      if (r.paper_violation()) {
        ++res.summary.paper_violations;
        paper_violation = true;
      }
      if (!r.vacuous) {
        res.summary.worst_margin =
            res.summary.worst_margin ? std::min(*res.summary.worst_margin, r.margin) : r.margin;
      }
    }
    if (failed) res.summary.failure_seeds.push_back(t.seed);
    if (paper_violation) res.summary.counterexample_seeds.push_back(t.seed);
    res.trials.push_back(std::move(t));
  }
  return res;
}

}  // namespace oversmooth
