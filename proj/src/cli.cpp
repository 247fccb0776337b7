#include "epiq/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "epiq/born.hpp"
#include "epiq/errors.hpp"
#include "epiq/hilbert.hpp"
#include "epiq/measurement.hpp"
#include "epiq/model_io.hpp"
#include "epiq/qubit.hpp"
#include "epiq/reduction.hpp"
#include "epiq/report.hpp"
#include "epiq/sampling.hpp"

namespace epiq {

namespace {

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Failure that maps to exit code 1 after the message has been printed.
class ValidationFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_name;
  std::string model_path;
  std::string from;
  std::string to;
  std::string prior;
  std::uint64_t runs = 10000;
  std::optional<std::uint64_t> seed;
  std::optional<double> tolerance;
  std::string out;
  std::string format = "json";
  std::string plan;
  double readout_error = 0.0;
  std::string angles;
  std::string directions;
  std::string mode = "quantum-analytic";
  std::uint64_t samples = 100000;
  std::uint64_t states = 20;
  std::string factor;
  std::string orbits;
  std::string model_out;
  std::string value;
  unsigned threads = 1;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::vector<double> parse_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + part + "' is not a number");
    }
  }
  return out;
}

std::vector<std::size_t> parse_indices(const std::string& text, const std::string& flag) {
  std::vector<std::size_t> out;
  for (const auto& part : split(text, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw UsageError(flag + ": '" + part + "' is not an index");
    out.push_back(std::stoull(part));
  }
  return out;
}

ExperimentModel resolve_model(const Options& o) {
  if (!o.model_path.empty()) return load_model(o.model_path);
  if (o.model_name.empty()) throw UsageError("no model given (name a bundled model or use --model PATH)");
  const auto names = bundled_model_names();
  if (std::find(names.begin(), names.end(), o.model_name) != names.end())
    return load_bundled_model(o.model_name);
  if (std::filesystem::exists(o.model_name)) return load_model(o.model_name);
  std::string known;
  for (const auto& n : names) known += (known.empty() ? "" : ", ") + n;
  throw UsageError("unknown model '" + o.model_name + "' (bundled: " + known + ")");
}

Tolerances tolerances(const Options& o) {
  Tolerances tol;
  if (o.tolerance) {
    if (!(*o.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
    tol.structural = *o.tolerance;
  }
  return tol;
}

std::uint64_t require_seed(const Options& o, const std::string& command) {
  if (!o.seed) throw UsageError(command + " is stochastic and requires --seed");
  return *o.seed;
}

ExperimentIndex experiment_flag(const ExperimentModel& m, const std::string& label,
                                const std::string& flag) {
  if (auto a = m.catalog().find(label)) return *a;
  throw UsageError(flag + ": unknown experiment '" + label + "'");
}

Json metadata(const ExperimentModel* model, std::optional<std::uint64_t> seed,
              const Tolerances& tol, std::optional<RealizationMode> mode) {
  Json m = Json::object();
  m["format_version"] = 1;
  m["model"] = model ? Json(model->name()) : Json();
  m["model_hash"] = model ? Json(model_hash(*model)) : Json();
  m["seed"] = seed ? Json(*seed) : Json();
  m["tolerances"] = {{"structural", tol.structural},
                     {"word_consistency", tol.word_consistency},
                     {"probability", 1e-12}};
  m["realization_mode"] = mode ? Json(to_string(*mode)) : Json();
  return m;
}

Json labels_of(const Experiment& e) {
  Json out = Json::array();
  for (const auto& v : e.values()) out.push_back(v.name);
  return out;
}

QuantumModel build_or_fail(ExperimentModel model, const Tolerances& tol) {
  try {
    return QuantumModel::build(std::move(model), tol);
  } catch (const ModelInvalid& e) {
    throw ValidationFailure(e.what());
  }
}

// validate ------------------------------------------------------------------

Json validation_payload(const ExperimentModel& model, const ValidationReport& v) {
  Json checks = Json::array();
  for (const auto& c : v.checks)
    checks.push_back({{"id", c.id},
                      {"statement", c.statement},
                      {"status", to_string(c.status)},
                      {"detail", c.detail},
                      {"witnesses", c.witnesses}});
  Json induced = Json::object();
  Json blocks = Json::object();
  for (ExperimentIndex a = 0; a < model.catalog().size(); ++a) {
    const auto& label = model.catalog().experiment(a).label();
    induced[label] = v.induced_subgroup_sizes.at(a);
    blocks[label] = v.block_sizes.at(a);
  }
  return {{"model", v.model_name},
          {"ok", v.ok()},
          {"counts",
           {{"pass", v.count(CheckStatus::pass)},
            {"warning", v.count(CheckStatus::warning)},
            {"fail", v.count(CheckStatus::fail)}}},
          {"checks", checks},
          {"generates_group", v.generates_group},
          {"generated_order", v.generated_order},
          {"group_order", model.group().size()},
          {"induced_subgroup_sizes", induced},
          {"block_sizes", blocks},
          {"eigenvalue_sets_agree", v.eigenvalue_sets_agree}};
}

CsvTable checks_table(const ValidationReport& v) {
  CsvTable t{"checks", {"id", "status", "detail"}, {}};
  for (const auto& c : v.checks) t.rows.push_back({c.id, to_string(c.status), c.detail});
  return t;
}

int cmd_validate(const Options& o, Report& r) {
  const auto model = resolve_model(o);
  const auto tol = tolerances(o);
  const auto v = validate_assumptions(model);
  r.kind = ReportKind::validation;
  r.metadata = metadata(&model, std::nullopt, tol, std::nullopt);
  r.payload = validation_payload(model, v);
  r.tables.push_back(checks_table(v));
  return v.ok() ? kExitOk : kExitValidation;
}

// build ---------------------------------------------------------------------

int cmd_build(const Options& o, Report& r) {
  const auto tol = tolerances(o);
  const auto qm = build_or_fail(resolve_model(o), tol);
  const auto& group = qm.model().group();
  const auto& w = qm.W();
  const auto d = static_cast<Eigen::Index>(qm.dimension());

  double unitarity = 0.0;
  double homomorphism = 0.0;
  Json matrices = Json::object();
  Json domain = Json::array();
  for (auto g : w.domain) {
    domain.push_back(group.name(g));
    const auto& m = w.at(g);
    unitarity = std::max(unitarity, matrix_norm(m.adjoint() * m - CMatrix::Identity(d, d), tol.norm));
    matrices[group.name(g)] = to_json(m);
    for (auto h : w.domain)
      homomorphism = std::max(homomorphism,
                              matrix_norm(m * w.at(h) - w.at(group.multiply(g, h)), tol.norm));
  }
  r.kind = ReportKind::validation;
  r.metadata = metadata(&qm.model(), std::nullopt, tol, qm.mode());
  r.payload = validation_payload(qm.model(), qm.validation());
  r.payload["representation"] = {{"dimension", qm.dimension()},
                                 {"realization_mode", to_string(qm.mode())},
                                 {"domain", domain},
                                 {"unitarity_residual", unitarity},
                                 {"homomorphism_residual", homomorphism},
                                 {"word_consistency_residual", w.word_consistency_residual},
                                 {"invariance_residual", w.invariance_residual},
                                 {"matrices", matrices}};
  r.tables.push_back(checks_table(qm.validation()));
  CsvTable residuals{"representation", {"quantity", "value"}, {}};
  residuals.rows.push_back({"dimension", std::to_string(qm.dimension())});
  residuals.rows.push_back({"realization_mode", to_string(qm.mode())});
  residuals.rows.push_back({"unitarity_residual", format_double(unitarity)});
  residuals.rows.push_back({"homomorphism_residual", format_double(homomorphism)});
  residuals.rows.push_back({"word_consistency_residual", format_double(w.word_consistency_residual)});
  r.tables.push_back(std::move(residuals));
  return kExitOk;
}

// states --------------------------------------------------------------------

int cmd_states(const Options& o, Report& r) {
  const auto tol = tolerances(o);
  const auto qm = build_or_fail(resolve_model(o), tol);
  Json experiments = Json::object();
  CsvTable table{"states", {"experiment", "value", "eigenvalue", "via_fallback", "eigen_residual"}, {}};
  for (ExperimentIndex a = 0; a < qm.catalog().size(); ++a) {
    const auto& exp = qm.catalog().experiment(a);
    const auto& t = qm.observable(a);
    Json states = Json::array();
    for (const auto& s : qm.states(a)) {
      const auto& v = s.vector.coords();
      const double lambda = exp.value(s.value_index).eigenvalue;
      const double residual = (t.matrix * v - lambda * v).norm();
      states.push_back({{"value", exp.value(s.value_index).name},
                        {"eigenvalue", lambda},
                        {"vector", to_json(v)},
                        {"via_fallback", s.via_fallback},
                        {"eigen_residual", residual}});
      table.rows.push_back({exp.label(), exp.value(s.value_index).name, format_double(lambda),
                            s.via_fallback ? "true" : "false", format_double(residual)});
    }
    experiments[exp.label()] = {{"values", labels_of(exp)},
                                {"eigenvalues", t.eigenvalues},
                                {"states", states},
                                {"observable", to_json(t.matrix)}};
  }
  r.kind = ReportKind::born;
  r.metadata = metadata(&qm.model(), std::nullopt, tol, qm.mode());
  r.payload = {{"dimension", qm.dimension()}, {"experiments", experiments}};
  r.tables.push_back(std::move(table));
  return kExitOk;
}

// born ----------------------------------------------------------------------

int cmd_born(const Options& o, Report& r) {
  const auto tol = tolerances(o);
  const auto qm = build_or_fail(resolve_model(o), tol);
  const auto& catalog = qm.catalog();
  std::vector<ExperimentIndex> froms;
  std::vector<ExperimentIndex> tos;
  for (ExperimentIndex a = 0; a < catalog.size(); ++a) {
    froms.push_back(a);
    tos.push_back(a);
  }
  if (!o.from.empty()) froms = {experiment_flag(qm.model(), o.from, "--from")};
  if (!o.to.empty()) tos = {experiment_flag(qm.model(), o.to, "--to")};

  Json transitions = Json::array();
  CsvTable table{"transitions", {"from", "from_value", "to", "to_value", "probability"}, {}};
  for (auto a : froms)
    for (auto b : tos) {
      const auto t = transition_matrix(qm, a, b);
      const auto& ea = catalog.experiment(a);
      const auto& eb = catalog.experiment(b);
      Json expectations = Json::array();
      for (ValueIndex k = 0; k < ea.num_values(); ++k)
        expectations.push_back(conditional_expectation(qm, a, k, b));
      transitions.push_back({{"from", ea.label()},
                             {"to", eb.label()},
                             {"from_values", labels_of(ea)},
                             {"to_values", labels_of(eb)},
                             {"matrix", to_json(t.entries)},
                             {"via_fallback", t.via_fallback},
                             {"conditional_expectation", expectations}});
      for (Eigen::Index k = 0; k < t.entries.rows(); ++k)
        for (Eigen::Index i = 0; i < t.entries.cols(); ++i)
          table.rows.push_back({ea.label(), ea.value(static_cast<ValueIndex>(k)).name, eb.label(),
                                eb.value(static_cast<ValueIndex>(i)).name,
                                format_double(t.entries(k, i))});
    }

  r.kind = ReportKind::born;
  r.metadata = metadata(&qm.model(), std::nullopt, tol, qm.mode());
  r.payload = {{"transitions", transitions}};

  if (!o.prior.empty()) {
    if (o.from.empty()) throw UsageError("--prior needs --from to name the experiment it weights");
    const auto a = froms.front();
    const auto rho = density_from_prior(qm, a, parse_numbers(o.prior, "--prior"));
    Json predictive = Json::object();
    for (auto b : tos) predictive[catalog.experiment(b).label()] = answer_distribution(qm, rho, b);
    r.payload["prior"] = {{"experiment", catalog.experiment(a).label()},
                          {"weights", rho.provenance()->weights},
                          {"density_matrix", to_json(rho.matrix())},
                          {"predictive", predictive}};
  }
  r.tables.push_back(std::move(table));
  return kExitOk;
}

// simulate ------------------------------------------------------------------

int cmd_simulate(const Options& o, Report& r) {
  const auto seed = require_seed(o, "simulate");
  const auto tol = tolerances(o);
  const auto qm = build_or_fail(resolve_model(o), tol);
  if (o.plan.empty()) throw UsageError("simulate needs --plan LABEL,LABEL,...");
  if (o.runs < 1) throw UsageError("--runs must be at least 1");

  std::vector<PlanStep> plan;
  for (const auto& label : split(o.plan, ',')) {
    const auto b = experiment_flag(qm.model(), label, "--plan");
    plan.push_back({b, StatisticalModel::symmetric_noise(qm, b, o.readout_error)});
  }

  std::optional<DensityMatrix> initial;
  if (!o.from.empty()) {
    const auto a = experiment_flag(qm.model(), o.from, "--from");
    std::vector<double> prior;
    if (o.prior.empty())
      prior.assign(qm.catalog().experiment(a).num_values(),
                   1.0 / static_cast<double>(qm.catalog().experiment(a).num_values()));
    else
      prior = parse_numbers(o.prior, "--prior");
    initial = density_from_prior(qm, a, prior);
  } else {
    if (!o.prior.empty()) throw UsageError("--prior needs --from to name the experiment it weights");
    initial = DensityMatrix::maximally_mixed(qm.dimension());
  }

  const auto trace = simulate_sequence(qm, *initial, plan, o.runs, seed, o.threads);

  Json steps = Json::array();
  CsvTable table{"steps", {"step", "experiment", "outcome", "count", "frequency", "predicted", "z"}, {}};
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& s = trace.steps[t];
    const auto freq = s.outcome_frequencies();
    double max_z = 0.0;
    Json z_scores = Json::array();
    for (std::size_t y = 0; y < freq.size(); ++y) {
      const double p = std::clamp(s.predicted_outcomes[y], 0.0, 1.0);
      const double sigma = std::sqrt(std::max(p * (1.0 - p), 0.0) / static_cast<double>(trace.runs));
      const double z = sigma > 0.0 ? std::abs(freq[y] - p) / sigma
                                   : (std::abs(freq[y] - p) > 0.0 ? INFINITY : 0.0);
      max_z = std::max(max_z, z);
      z_scores.push_back(z);
      table.rows.push_back({std::to_string(t), qm.catalog().experiment(s.experiment).label(),
                            s.outcomes[y], std::to_string(s.outcome_counts[y]),
                            format_double(freq[y]), format_double(p), format_double(z)});
    }
    steps.push_back({{"experiment", qm.catalog().experiment(s.experiment).label()},
                     {"outcomes", s.outcomes},
                     {"predicted_values", s.predicted_values},
                     {"predicted_outcomes", s.predicted_outcomes},
                     {"value_counts", s.value_counts},
                     {"outcome_counts", s.outcome_counts},
                     {"value_frequencies", s.value_frequencies()},
                     {"outcome_frequencies", freq},
                     {"transition_counts", s.transition_counts},
                     {"z_scores", z_scores},
                     {"max_z", max_z},
                     {"pre_state", to_json(s.pre_state)},
                     {"empirical_post_state", to_json(s.empirical_post_state)}});
  }
  Json records = Json::array();
  for (const auto& rec : trace.recorded_runs)
    records.push_back({{"values", rec.values}, {"outcomes", rec.outcomes}, {"bayes", rec.bayes}});

  r.kind = ReportKind::simulation;
  r.metadata = metadata(&qm.model(), seed, tol, qm.mode());
  r.payload = {{"runs", trace.runs},
               {"readout_error", o.readout_error},
               {"initial_state", to_json(trace.initial)},
               {"steps", steps},
               {"recorded_runs", records}};
  r.tables.push_back(std::move(table));
  return kExitOk;
}

// gleason-check -------------------------------------------------------------

int cmd_gleason(const Options& o, Report& r) {
  const auto seed = require_seed(o, "gleason-check");
  const auto tol = tolerances(o);
  const auto qm = build_or_fail(resolve_model(o), tol);
  const auto d = qm.dimension();
  const std::uint64_t states = o.states;

  Json cases = Json::array();
  CsvTable table{"gleason", {"case", "sample_size", "frobenius_error", "residual", "min_raw_eigenvalue"}, {}};
  double worst_fit = 0.0;
  double worst_mixture = 0.0;
  double worst_decomposition = 0.0;
  for (std::uint64_t c = 0; c < states; ++c) {
    Rng rng = derive_stream(seed, c);
    const auto rho = random_density_matrix(d, rng);
    std::vector<GleasonSample> samples;
    for (auto& e : random_effect_sample(d, d + 1, rng)) {
      const double p = effect_probability(rho, e);
      samples.push_back({std::move(e), p});
    }
    const auto fit = gleason_fit(samples);
    const double error = (fit.recovered.matrix() - rho.matrix()).norm();

    const auto e1 = random_effect(d, rng);
    const auto e2 = random_effect(d, rng);
    const double mixture = mixture_check(e1, e2, rho);
    double decomposition = 0.0;
    if (d >= 2) {
      const auto [f1, f2] = degenerate_effect_pair(d, rng);
      decomposition = std::abs(effect_probability(rho, f1) - effect_probability(rho, f2));
    }
    worst_fit = std::max(worst_fit, error);
    worst_mixture = std::max(worst_mixture, mixture);
    worst_decomposition = std::max(worst_decomposition, decomposition);
    cases.push_back({{"sample_size", fit.sample_size},
                     {"frobenius_error", error},
                     {"residual", fit.residual},
                     {"raw_residual", fit.raw_residual},
                     {"min_raw_eigenvalue", fit.min_raw_eigenvalue},
                     {"mixture_residual", mixture},
                     {"decomposition_gap", decomposition}});
    table.rows.push_back({std::to_string(c), std::to_string(fit.sample_size), format_double(error),
                          format_double(fit.residual), format_double(fit.min_raw_eigenvalue)});
  }
  r.kind = ReportKind::gleason;
  r.metadata = metadata(&qm.model(), seed, tol, qm.mode());
  r.payload = {{"dimension", d},
               {"cases", cases},
               {"max_frobenius_error", worst_fit},
               {"max_mixture_residual", worst_mixture},
               {"max_decomposition_gap", worst_decomposition}};
  r.tables.push_back(std::move(table));
  return kExitOk;
}

// bell ----------------------------------------------------------------------

std::vector<Direction> bell_directions(const Options& o) {
  if (!o.angles.empty() && !o.directions.empty())
    throw UsageError("give either --angles or --directions, not both");
  std::vector<Direction> out;
  try {
    if (!o.directions.empty()) {
      for (const auto& triple : split(o.directions, ';')) {
        const auto v = parse_numbers(triple, "--directions");
        if (v.size() != 3) throw UsageError("--directions: each direction needs three components");
        out.emplace_back(Vec3(v[0], v[1], v[2]));
      }
    } else {
      for (double deg : parse_numbers(o.angles.empty() ? "0,90,45,135" : o.angles, "--angles"))
        out.push_back(Direction::planar(deg));
    }
  } catch (const InvalidDirection& e) {
    throw UsageError(std::string("--directions: ") + e.what());
  }
  if (out.size() != 4) throw UsageError("CHSH needs exactly four directions a, a', b, b'");
  return out;
}

int cmd_bell(const Options& o, Report& r) {
  const auto dirs = bell_directions(o);
  BellMode mode;
  if (o.mode == "quantum-analytic") mode = BellMode::quantum_analytic;
  else if (o.mode == "quantum-sampled") mode = BellMode::quantum_sampled;
  else if (o.mode == "classical") mode = BellMode::classical;
  else throw UsageError("--mode must be quantum-analytic, quantum-sampled or classical");
  std::optional<std::uint64_t> seed;
  if (mode != BellMode::quantum_analytic) {
    seed = require_seed(o, "bell --mode " + o.mode);
    if (o.samples < 1) throw UsageError("--samples must be at least 1");
  }
  const auto result = chsh(dirs[0], dirs[1], dirs[2], dirs[3], mode, o.samples, seed.value_or(0));

  Json directions = Json::array();
  for (const auto& d : dirs)
    directions.push_back({d.components().x(), d.components().y(), d.components().z()});
  const std::array<const char*, 4> pairs{"a,b", "a,b'", "a',b", "a',b'"};
  Json correlations = Json::object();
  Json errors = Json::object();
  CsvTable table{"correlations", {"pair", "correlation", "standard_error"}, {}};
  for (std::size_t k = 0; k < 4; ++k) {
    correlations[pairs[k]] = result.correlations[k];
    errors[pairs[k]] = result.standard_errors[k];
    table.rows.push_back({pairs[k], format_double(result.correlations[k]),
                          format_double(result.standard_errors[k])});
  }
  table.rows.push_back({"S", format_double(result.value), format_double(result.standard_error)});

  r.kind = ReportKind::bell;
  r.metadata = metadata(nullptr, seed, tolerances(o), std::nullopt);
  r.payload = {{"mode", o.mode},
               {"directions", directions},
               {"samples", mode == BellMode::quantum_analytic ? Json() : Json(o.samples)},
               {"correlations", correlations},
               {"standard_errors", errors},
               {"S", result.value},
               {"standard_error", result.standard_error},
               {"violation", result.violation},
               {"classical_bound", 2.0},
               {"quantum_bound", 2.0 * std::numbers::sqrt2}};
  r.tables.push_back(std::move(table));
  return kExitOk;
}

// reduce --------------------------------------------------------------------

int cmd_reduce(const Options& o, Report& r) {
  const auto model = resolve_model(o);
  if (o.factor.empty()) throw UsageError("reduce needs --factor LABEL");
  const auto a = experiment_flag(model, o.factor, "--factor");
  const auto wide = wide_parameter_from_experiment(model, a);
  std::vector<std::size_t> selected;
  if (o.orbits.empty())
    for (std::size_t k = 0; k < range_orbits(wide).size(); ++k) selected.push_back(k);
  else
    selected = parse_indices(o.orbits, "--orbits");

  std::optional<ReducedModel> reduced;
  try {
    reduced = reduce_model(model, a, selected);
  } catch (const NoOrbitSelected& e) {
    throw UsageError(std::string("--orbits: ") + e.what());
  } catch (const InvalidExperiment& e) {
    throw ValidationFailure(std::string("reduced experiment is not admissible: ") + e.what());
  }
  const auto& red = reduced->reduction;
  const auto natural = natural_function_check(red.restricted_labels(), red.restricted_action());
  const auto validation = validate_assumptions(reduced->model);

  Json orbits = Json::array();
  for (const auto& orbit : red.orbits) {
    Json members = Json::array();
    for (auto v : orbit) members.push_back(wide.range()[v]);
    orbits.push_back(members);
  }
  Json value_map = Json::object();
  CsvTable table{"value_map", {"value", "reduced"}, {}};
  for (std::size_t v = 0; v < red.value_map.size(); ++v) {
    const auto& m = red.value_map[v];
    value_map[wide.range()[v]] = m ? Json(red.labels[*m]) : Json();
    table.rows.push_back({wide.range()[v], m ? red.labels[*m] : ""});
  }

  if (!o.model_out.empty()) save_model(reduced->model, o.model_out);

  r.kind = ReportKind::reduce;
  r.metadata = metadata(&model, std::nullopt, tolerances(o), std::nullopt);
  r.payload = {{"factor", o.factor},
               {"induced_subgroup", [&] {
                  Json names = Json::array();
                  for (auto g : wide.elements) names.push_back(model.group().name(g));
                  return names;
                }()},
               {"orbits", orbits},
               {"selected_orbits", red.selected_orbits},
               {"reduced_values", red.labels},
               {"value_map", value_map},
               {"natural", natural.natural},
               {"dropped_experiments", reduced->dropped_experiments},
               {"reduced_model",
                {{"name", reduced->model.name()},
                 {"hash", model_hash(reduced->model)},
                 {"points", reduced->model.num_points()},
                 {"group_order", reduced->model.group().size()},
                 {"experiments", reduced->model.catalog().size()},
                 {"written_to", o.model_out.empty() ? Json() : Json(o.model_out)}}},
               {"reduced_validation", validation_payload(reduced->model, validation)}};
  r.tables.push_back(std::move(table));
  return kExitOk;
}

// gcs -----------------------------------------------------------------------

int cmd_gcs(const Options& o, Report& r) {
  const auto tol = tolerances(o);
  const auto qm = build_or_fail(resolve_model(o), tol);
  const auto a = o.from.empty() ? qm.catalog().reference()
                                : experiment_flag(qm.model(), o.from, "--from");
  const auto& exp = qm.catalog().experiment(a);
  ValueIndex k = 0;
  if (!o.value.empty()) {
    auto found = exp.find_value(o.value);
    if (!found) throw UsageError("--value: experiment '" + exp.label() + "' has no value '" + o.value + "'");
    k = *found;
  }
  const auto gcs = enumerate_gcs(qm, qm.state(a, k).vector);
  const auto& group = qm.model().group();

  Json vectors = Json::array();
  CsvTable table{"gcs", {"element", "vector"}, {}};
  for (std::size_t i = 0; i < gcs.vectors.size(); ++i) {
    vectors.push_back({{"element", group.name(gcs.elements[i])},
                       {"vector", to_json(gcs.vectors[i].coords())}});
    std::string text;
    for (Eigen::Index j = 0; j < gcs.vectors[i].coords().size(); ++j) {
      const auto z = gcs.vectors[i].coords()(j);
      text += (j ? " " : "") + format_double(z.real()) + (z.imag() < 0 ? "" : "+") +
              format_double(z.imag()) + "i";
    }
    table.rows.push_back({group.name(gcs.elements[i]), text});
  }
  Json missing = Json::array();
  for (const auto& [b, j] : gcs.missing)
    missing.push_back({{"experiment", qm.catalog().experiment(b).label()},
                       {"value", qm.catalog().experiment(b).value(j).name}});

  r.kind = ReportKind::gcs;
  r.metadata = metadata(&qm.model(), std::nullopt, tol, qm.mode());
  r.payload = {{"seed_state", {{"experiment", exp.label()}, {"value", exp.value(k).name}}},
               {"count", gcs.vectors.size()},
               {"vectors", vectors},
               {"contains_all_states", gcs.contains_all_states},
               {"missing", missing}};
  r.tables.push_back(std::move(table));
  return kExitOk;
}

void add_model_options(CLI::App* sub, Options& o) {
  sub->add_option("name", o.model_name, "Bundled model name or model file");
  sub->add_option("--model", o.model_path, "Model file");
}

void add_output_options(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "Write the report to this file");
  sub->add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  sub->add_option("--tolerance", o.tolerance, "Structural tolerance");
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Finite epistemic-process models: validation, Hilbert representation, "
               "Born probabilities, simulation, Bell tests and reduction"};
  app.name("epiq");
  app.require_subcommand(1);

  auto* validate = app.add_subcommand("validate", "Check the model assumptions");
  auto* build = app.add_subcommand("build", "Build the representation and report residuals");
  auto* states = app.add_subcommand("states", "State vectors and observables");
  auto* born = app.add_subcommand("born", "Transition probabilities between experiments");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo over experiment sequences");
  auto* gleason = app.add_subcommand("gleason-check", "Recover random states from effect probabilities");
  auto* bell = app.add_subcommand("bell", "CHSH value for four directions");
  auto* reduce = app.add_subcommand("reduce", "Orbit reduction of one experiment");
  auto* gcs = app.add_subcommand("gcs", "Generalized coherent states from one state vector");

  for (auto* sub : {validate, build, states, born, simulate, gleason, reduce, gcs})
    add_model_options(sub, o);
  for (auto* sub : {validate, build, states, born, simulate, gleason, bell, reduce, gcs})
    add_output_options(sub, o);

  born->add_option("--from", o.from, "Experiment measured first");
  born->add_option("--to", o.to, "Experiment measured next");
  born->add_option("--prior", o.prior, "Weights over the values of --from");

  simulate->add_option("--plan", o.plan, "Comma-separated experiment sequence");
  simulate->add_option("--runs", o.runs, "Number of runs");
  simulate->add_option("--seed", o.seed, "Random seed");
  simulate->add_option("--from", o.from, "Experiment whose prior sets the initial state");
  simulate->add_option("--prior", o.prior, "Weights over the values of --from");
  simulate->add_option("--readout-error", o.readout_error, "Symmetric readout error rate")
      ->check(CLI::Range(0.0, 1.0));
  simulate->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1u, 256u));

  gleason->add_option("--samples", o.states, "Number of random states");
  gleason->add_option("--seed", o.seed, "Random seed");

  bell->add_option("--angles", o.angles, "Planar angles in degrees: a,a',b,b'");
  bell->add_option("--directions", o.directions, "Unit vectors: x,y,z;x,y,z;x,y,z;x,y,z");
  bell->add_option("--mode", o.mode, "quantum-analytic, quantum-sampled or classical");
  bell->add_option("--samples", o.samples, "Draws per correlation");
  bell->add_option("--seed", o.seed, "Random seed");

  reduce->add_option("--factor", o.factor, "Experiment to reduce");
  reduce->add_option("--orbits", o.orbits, "Comma-separated orbit indices (default all)");
  reduce->add_option("--model-out", o.model_out, "Write the reduced model file here");

  gcs->add_option("--from", o.from, "Experiment of the seed state (default the reference)");
  gcs->add_option("--value", o.value, "Value of the seed state (default the first)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  Report report;
  int code = kExitOk;
  try {
    if (validate->parsed()) code = cmd_validate(o, report);
    else if (build->parsed()) code = cmd_build(o, report);
    else if (states->parsed()) code = cmd_states(o, report);
    else if (born->parsed()) code = cmd_born(o, report);
    else if (simulate->parsed()) code = cmd_simulate(o, report);
    else if (gleason->parsed()) code = cmd_gleason(o, report);
    else if (bell->parsed()) code = cmd_bell(o, report);
    else if (reduce->parsed()) code = cmd_reduce(o, report);
    else code = cmd_gcs(o, report);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ModelLoadError& e) {
    err << "error: model file rejected\n" << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  const auto text = o.format == "csv" ? to_csv_text(report) : to_json_text(report);
  if (o.out.empty()) {
    out << text;
  } else {
    std::ofstream file(o.out, std::ios::binary);
    file << text;
    if (!file) {
      err << "error: cannot write " << o.out << "\n";
      return kExitUsage;
    }
  }
  return code;
}

} // namespace epiq
