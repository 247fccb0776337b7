#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "epiq/born.hpp"
#include "epiq/density.hpp"
#include "epiq/hilbert.hpp"

namespace epiq {

/// rho = sum_k pi_k |a,k><a,k|. Throws BadPrior unless pi is nonnegative and sums to 1 +- 1e-12.
DensityMatrix density_from_prior(const QuantumModel& qm, ExperimentIndex a,
                                 std::span<const double> prior);

/**
 * Readout model of experiment b: likelihood(y, j) = p(y | lambda^b = lambda_j).
 * Every column is a distribution over the outcomes (to 1e-12).
 */
class StatisticalModel {
public:
  StatisticalModel(ExperimentIndex experiment, std::vector<std::string> outcomes,
                   RMatrix likelihood);

  /// Outcome j observed exactly when the value is j.
  static StatisticalModel perfect(const QuantumModel& qm, ExperimentIndex b);
  /// Correct value with probability 1 - error, each other value error / (n - 1).
  static StatisticalModel symmetric_noise(const QuantumModel& qm, ExperimentIndex b, double error);

  ExperimentIndex experiment() const noexcept { return experiment_; }
  const std::vector<std::string>& outcomes() const noexcept { return outcomes_; }
  const RMatrix& likelihood() const noexcept { return likelihood_; }
  std::size_t num_outcomes() const noexcept { return outcomes_.size(); }
  std::size_t num_values() const noexcept { return static_cast<std::size_t>(likelihood_.cols()); }

private:
  ExperimentIndex experiment_;
  std::vector<std::string> outcomes_;
  RMatrix likelihood_;
};

/// M(y) = sum_j p(y|lambda_j) |b,j><b,j|, one effect per outcome.
struct OperatorMeasure {
  ExperimentIndex experiment;
  std::vector<std::string> outcomes;
  std::vector<CMatrix> elements;
};

OperatorMeasure operator_measure(const QuantumModel& qm, const StatisticalModel& model);

/// P(y) = tr(rho M(y)).
std::vector<double> predictive_distribution(const DensityMatrix& rho, const OperatorMeasure& m);

/// kappa_j = <b,j|rho|b,j>, the distribution of the answer to question b.
std::vector<double> answer_distribution(const QuantumModel& qm, const DensityMatrix& rho,
                                        ExperimentIndex b);

/// E(lambda^b | lambda^a = lambda_k) = <a,k|T^b|a,k>.
double conditional_expectation(const QuantumModel& qm, ExperimentIndex a, ValueIndex k,
                               ExperimentIndex b);

/// Without an outcome: dephasing sum_j <b,j|rho|b,j> |b,j><b,j|. With outcome j:
/// |b,j><b,j|, throwing ZeroProbabilityOutcome if <b,j|rho|b,j> < 1e-15.
DensityMatrix posterior_state(const QuantumModel& qm, const DensityMatrix& rho, ExperimentIndex b,
                              std::optional<ValueIndex> outcome = std::nullopt);

/// Posterior over lambda_j after observing outcome y: prior_j p(y|j) / sum.
std::vector<double> bayes_weights(const StatisticalModel& model, std::span<const double> prior,
                                  std::size_t outcome);

struct PlanStep {
  ExperimentIndex experiment;
  StatisticalModel readout;
};

struct StepSummary {
  ExperimentIndex experiment;
  std::vector<std::string> outcomes;
  std::vector<double> predicted_values;    // kappa from the no-readout chain
  std::vector<double> predicted_outcomes;  // tr(rho_t M(y))
  std::vector<std::uint64_t> value_counts;
  std::vector<std::uint64_t> outcome_counts;
  /// counts[previous value][this value]; empty for the first step.
  std::vector<std::vector<std::uint64_t>> transition_counts;
  CMatrix pre_state;              // ensemble state before the step
  CMatrix empirical_post_state;   // sum_j freq_j |b,j><b,j|

  std::vector<double> value_frequencies() const;
  std::vector<double> outcome_frequencies() const;
};

struct RunRecord {
  std::vector<ValueIndex> values;
  std::vector<std::size_t> outcomes;
  std::vector<std::vector<double>> bayes;  // posterior over lambda_j given y, per step
};

struct SimulationTrace {
  std::uint64_t seed = 0;
  std::uint64_t runs = 0;
  CMatrix initial;
  std::vector<StepSummary> steps;
  std::vector<RunRecord> recorded_runs;  // the first few runs in full
};

/**
 * Monte Carlo over experiment sequences. Each run draws the answer from kappa,
 * the observation from the readout likelihood, and collapses to |b,j>. Run r
 * uses stream derive_stream(seed, r); with threads > 1 runs are sharded and
 * counts summed, so the trace is identical for any thread count.
 */
SimulationTrace simulate_sequence(const QuantumModel& qm, const DensityMatrix& initial,
                                  const std::vector<PlanStep>& plan, std::uint64_t runs,
                                  std::uint64_t seed, unsigned threads = 1,
                                  std::size_t recorded_runs = 10);

} // namespace epiq
