#include "epiq/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "epiq/errors.hpp"
#include "epiq/rng.hpp"

namespace epiq {

namespace {

std::size_t sample_index(std::span<const double> probabilities, Rng& rng) {
  const double u = uniform01(rng);
  double acc = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    acc += probabilities[i];
    last_positive = i;
    if (u < acc) return i;
  }
  return last_positive;  // rounding at the upper end
}

std::vector<double> column(const RMatrix& m, std::size_t j) {
  std::vector<double> out(static_cast<std::size_t>(m.rows()));
  for (Eigen::Index y = 0; y < m.rows(); ++y) out[static_cast<std::size_t>(y)] = m(y, static_cast<Eigen::Index>(j));
  return out;
}

std::vector<double> frequencies(const std::vector<std::uint64_t>& counts) {
  const double total =
      static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}));
  std::vector<double> out;
  for (auto c : counts) out.push_back(total > 0 ? static_cast<double>(c) / total : 0.0);
  return out;
}

} // namespace

DensityMatrix density_from_prior(const QuantumModel& qm, ExperimentIndex a,
                                 std::span<const double> prior) {
  const auto& states = qm.states(a);
  if (prior.size() != states.size())
    throw BadPrior("prior has " + std::to_string(prior.size()) + " weights, experiment has " +
                   std::to_string(states.size()) + " values");
  double total = 0.0;
  for (double p : prior) {
    if (!(p >= 0.0)) throw BadPrior("prior weights must be nonnegative");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) throw BadPrior("prior weights must sum to 1");
  const auto d = static_cast<Eigen::Index>(qm.dimension());
  CMatrix rho = CMatrix::Zero(d, d);
  for (std::size_t k = 0; k < states.size(); ++k)
    rho += prior[k] * projector(states[k].vector.coords());
  return DensityMatrix(rho, PriorProvenance{a, {prior.begin(), prior.end()}});
}

StatisticalModel::StatisticalModel(ExperimentIndex experiment, std::vector<std::string> outcomes,
                                   RMatrix likelihood)
    : experiment_(experiment), outcomes_(std::move(outcomes)), likelihood_(std::move(likelihood)) {
  if (outcomes_.empty() || static_cast<Eigen::Index>(outcomes_.size()) != likelihood_.rows())
    throw InvalidStatisticalModel("one likelihood row per outcome is required");
  if (likelihood_.cols() < 1) throw InvalidStatisticalModel("likelihood has no columns");
  for (Eigen::Index j = 0; j < likelihood_.cols(); ++j) {
    double total = 0.0;
    for (Eigen::Index y = 0; y < likelihood_.rows(); ++y) {
      const double p = likelihood_(y, j);
      if (!(p >= 0.0 && p <= 1.0))
        throw InvalidStatisticalModel("likelihood entries must lie in [0, 1]");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-12)
      throw InvalidStatisticalModel("likelihood column " + std::to_string(j) +
                                    " does not sum to 1");
  }
}

StatisticalModel StatisticalModel::perfect(const QuantumModel& qm, ExperimentIndex b) {
  return symmetric_noise(qm, b, 0.0);
}

StatisticalModel StatisticalModel::symmetric_noise(const QuantumModel& qm, ExperimentIndex b,
                                                   double error) {
  const auto& exp = qm.catalog().experiment(b);
  const auto n = static_cast<Eigen::Index>(exp.num_values());
  if (!(error >= 0.0 && error <= 1.0))
    throw InvalidStatisticalModel("readout error must lie in [0, 1]");
  RMatrix l = RMatrix::Constant(n, n, error / static_cast<double>(n - 1));
  l.diagonal().setConstant(1.0 - error);
  std::vector<std::string> outcomes;
  for (const auto& v : exp.values()) outcomes.push_back(v.name);
  return StatisticalModel(b, std::move(outcomes), std::move(l));
}

OperatorMeasure operator_measure(const QuantumModel& qm, const StatisticalModel& model) {
  const auto& states = qm.states(model.experiment());
  if (model.num_values() != states.size())
    throw InvalidStatisticalModel("likelihood columns do not match the experiment's values");
  const auto d = static_cast<Eigen::Index>(qm.dimension());
  OperatorMeasure m{model.experiment(), model.outcomes(), {}};
  for (Eigen::Index y = 0; y < model.likelihood().rows(); ++y) {
    CMatrix e = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < states.size(); ++j)
      e += model.likelihood()(y, static_cast<Eigen::Index>(j)) * projector(states[j].vector.coords());
    m.elements.push_back(std::move(e));
  }
  return m;
}

std::vector<double> predictive_distribution(const DensityMatrix& rho, const OperatorMeasure& m) {
  std::vector<double> p;
  for (const auto& e : m.elements) {
    if (static_cast<std::size_t>(e.rows()) != rho.dimension())
      throw BasisMismatch("dimension mismatch");
    p.push_back((rho.matrix() * e).trace().real());
  }
  return p;
}

std::vector<double> answer_distribution(const QuantumModel& qm, const DensityMatrix& rho,
                                        ExperimentIndex b) {
  std::vector<double> kappa;
  for (const auto& s : qm.states(b)) {
    const auto& v = s.vector.coords();
    kappa.push_back(v.dot(rho.matrix() * v).real());
  }
  return kappa;
}

double conditional_expectation(const QuantumModel& qm, ExperimentIndex a, ValueIndex k,
                               ExperimentIndex b) {
  const auto& v = qm.state(a, k).vector.coords();
  return v.dot(qm.observable(b).matrix * v).real();
}

DensityMatrix posterior_state(const QuantumModel& qm, const DensityMatrix& rho, ExperimentIndex b,
                              std::optional<ValueIndex> outcome) {
  const auto& states = qm.states(b);
  if (outcome) {
    if (*outcome >= states.size()) throw std::out_of_range("outcome index out of range");
    const auto& v = states[*outcome].vector.coords();
    if (v.dot(rho.matrix() * v).real() < 1e-15)
      throw ZeroProbabilityOutcome("value '" + qm.catalog().experiment(b).value(*outcome).name +
                                   "' has zero probability in this state");
    return DensityMatrix::pure(v);
  }
  const auto kappa = answer_distribution(qm, rho, b);
  const auto d = static_cast<Eigen::Index>(qm.dimension());
  CMatrix out = CMatrix::Zero(d, d);
  for (std::size_t j = 0; j < states.size(); ++j)
    out += kappa[j] * projector(states[j].vector.coords());
  return DensityMatrix(out);
}

std::vector<double> bayes_weights(const StatisticalModel& model, std::span<const double> prior,
                                  std::size_t outcome) {
  if (prior.size() != model.num_values()) throw BadPrior("prior size mismatch");
  if (outcome >= model.num_outcomes()) throw std::out_of_range("outcome index out of range");
  std::vector<double> w(prior.size());
  double total = 0.0;
  for (std::size_t j = 0; j < prior.size(); ++j) {
    w[j] = prior[j] * model.likelihood()(static_cast<Eigen::Index>(outcome), static_cast<Eigen::Index>(j));
    total += w[j];
  }
  if (total <= 0.0) throw ZeroProbabilityOutcome("observation has zero predictive probability");
  for (auto& x : w) x /= total;
  return w;
}

std::vector<double> StepSummary::value_frequencies() const { return frequencies(value_counts); }
std::vector<double> StepSummary::outcome_frequencies() const { return frequencies(outcome_counts); }

namespace {

struct Shard {
  std::vector<std::vector<std::uint64_t>> value_counts;
  std::vector<std::vector<std::uint64_t>> outcome_counts;
  std::vector<std::vector<std::vector<std::uint64_t>>> transition_counts;
  std::vector<RunRecord> records;
};

Shard make_shard(const QuantumModel& qm, const std::vector<PlanStep>& plan) {
  Shard s;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    const auto n = qm.catalog().experiment(plan[t].experiment).num_values();
    s.value_counts.emplace_back(n, 0);
    s.outcome_counts.emplace_back(plan[t].readout.num_outcomes(), 0);
    if (t == 0) {
      s.transition_counts.emplace_back();
    } else {
      const auto m = qm.catalog().experiment(plan[t - 1].experiment).num_values();
      s.transition_counts.emplace_back(m, std::vector<std::uint64_t>(n, 0));
    }
  }
  return s;
}

void run_range(const QuantumModel& qm, const DensityMatrix& initial,
               const std::vector<PlanStep>& plan, std::uint64_t begin, std::uint64_t end,
               std::uint64_t seed, std::size_t record_limit, Shard& shard) {
  for (std::uint64_t r = begin; r < end; ++r) {
    Rng rng = derive_stream(seed, r);
    DensityMatrix rho = initial;
    RunRecord record;
    std::size_t previous = 0;
    for (std::size_t t = 0; t < plan.size(); ++t) {
      const auto& step = plan[t];
      const auto kappa = answer_distribution(qm, rho, step.experiment);
      const auto j = sample_index(kappa, rng);
      const auto likelihood = column(step.readout.likelihood(), j);
      const auto y = sample_index(likelihood, rng);
      ++shard.value_counts[t][j];
      ++shard.outcome_counts[t][y];
      if (t > 0) ++shard.transition_counts[t][previous][j];
      if (r < record_limit) {
        record.values.push_back(j);
        record.outcomes.push_back(y);
        record.bayes.push_back(bayes_weights(step.readout, kappa, y));
      }
      rho = posterior_state(qm, rho, step.experiment, j);
      previous = j;
    }
    if (r < record_limit) shard.records.push_back(std::move(record));
  }
}

} // namespace

SimulationTrace simulate_sequence(const QuantumModel& qm, const DensityMatrix& initial,
                                  const std::vector<PlanStep>& plan, std::uint64_t runs,
                                  std::uint64_t seed, unsigned threads,
                                  std::size_t recorded_runs) {
  if (runs < 1) throw std::invalid_argument("runs must be at least 1");
  if (initial.dimension() != qm.dimension()) throw BasisMismatch("initial state dimension");
  for (const auto& step : plan) {
    if (step.experiment >= qm.catalog().size()) throw UnknownExperiment("plan experiment");
    if (step.readout.experiment() != step.experiment ||
        step.readout.num_values() != qm.catalog().experiment(step.experiment).num_values())
      throw InvalidStatisticalModel("readout model does not belong to the plan experiment");
  }

  SimulationTrace trace;
  trace.seed = seed;
  trace.runs = runs;
  trace.initial = initial.matrix();

  threads = std::max(1u, threads);
  std::vector<Shard> shards(threads, make_shard(qm, plan));
  {
    std::vector<std::jthread> workers;
    for (unsigned s = 0; s < threads; ++s) {
      const std::uint64_t begin = runs * s / threads;
      const std::uint64_t end = runs * (s + 1) / threads;
      workers.emplace_back([&, s, begin, end] {
        run_range(qm, initial, plan, begin, end, seed, recorded_runs, shards[s]);
      });
    }
  }

  Shard total = make_shard(qm, plan);
  for (auto& shard : shards) {
    for (std::size_t t = 0; t < plan.size(); ++t) {
      for (std::size_t j = 0; j < total.value_counts[t].size(); ++j)
        total.value_counts[t][j] += shard.value_counts[t][j];
      for (std::size_t y = 0; y < total.outcome_counts[t].size(); ++y)
        total.outcome_counts[t][y] += shard.outcome_counts[t][y];
      for (std::size_t i = 0; i < total.transition_counts[t].size(); ++i)
        for (std::size_t j = 0; j < total.transition_counts[t][i].size(); ++j)
          total.transition_counts[t][i][j] += shard.transition_counts[t][i][j];
    }
    for (auto& rec : shard.records) trace.recorded_runs.push_back(std::move(rec));
  }

  DensityMatrix ensemble = initial;
  for (std::size_t t = 0; t < plan.size(); ++t) {
    const auto& step = plan[t];
    StepSummary summary;
    summary.experiment = step.experiment;
    summary.outcomes = step.readout.outcomes();
    summary.predicted_values = answer_distribution(qm, ensemble, step.experiment);
    summary.predicted_outcomes =
        predictive_distribution(ensemble, operator_measure(qm, step.readout));
    summary.value_counts = total.value_counts[t];
    summary.outcome_counts = total.outcome_counts[t];
    summary.transition_counts = total.transition_counts[t];
    summary.pre_state = ensemble.matrix();
    const auto freq = summary.value_frequencies();
    const auto d = static_cast<Eigen::Index>(qm.dimension());
    summary.empirical_post_state = CMatrix::Zero(d, d);
    for (std::size_t j = 0; j < freq.size(); ++j)
      summary.empirical_post_state += freq[j] * projector(qm.state(step.experiment, j).vector.coords());
    trace.steps.push_back(std::move(summary));
    ensemble = posterior_state(qm, ensemble, step.experiment);
  }
  return trace;
}

} // namespace epiq
