#pragma once

#include <span>
#include <vector>

#include "oas/error.hpp"

namespace oas {

/// Tolerance for belief normalization checks.
inline constexpr double kBeliefTolerance = 1e-9;

/// Probability vector over the abstraction catalog, plus a step counter.
struct BeliefState {
    std::vector<double> probs;
    int step = 0;

    int size() const { return static_cast<int>(probs.size()); }
};

BeliefState uniform_belief(int n);

/// Throws unless entries are >= 0 and sum to 1 within kBeliefTolerance.
void validate_belief(const BeliefState& b);

/// Markov model of how the active abstraction evolves between steps.
/// Entry (i, j) = p(abstraction i at t | abstraction j at t-1); every column
/// sums to 1.
struct AbstractionTransitionModel {
    int n = 0;
    std::vector<double> matrix;  // row-major, matrix[i * n + j]

    double at(int i, int j) const { return matrix[static_cast<std::size_t>(i) * n + j]; }

    /// Diagonal stay probability, remaining mass spread uniformly over the
    /// other abstractions. stay(n=2, 0.8) is the "high persistence" model,
    /// stay(n=2, 0.5) the uninformative one.
    static AbstractionTransitionModel stay(int n, double stay_prob);

    /// Validates column sums and entry ranges.
    static AbstractionTransitionModel from_matrix(int n, std::vector<double> column_stochastic);
};

/// Prior-propagation step: returned probs = T * b.probs (still sums to 1).
BeliefState dynamics_update(const BeliefState& b, const AbstractionTransitionModel& model);

struct MeasurementResult {
    BeliefState belief;
    /// True when all likelihood-weighted probabilities vanished; the update
    /// was skipped and `belief` equals the input.
    bool degenerate = false;
};

/// Bayes reweighting by per-abstraction likelihoods. If the normalizer is
/// exactly zero (possible only with zero smoothing) the update is skipped and
/// the degenerate flag is set.
MeasurementResult measurement_update(const BeliefState& b, std::span<const double> likelihoods);

/// Lowest index attaining the maximum probability.
int ml_abstraction(const BeliefState& b);

struct OasStepResult {
    BeliefState belief;
    int ml = 0;
    bool degenerate = false;
};

/// One filter step: dynamics update, then measurement update, then
/// maximum-likelihood selection, in that order.
OasStepResult oas_step(const BeliefState& b, const AbstractionTransitionModel& model,
                       std::span<const double> likelihoods);

/// Epsilon-smoothed indicator likelihood values used by the detection models:
/// a matched reward scores 1 - epsilon, a mismatched one scores epsilon.
/// With epsilon = 0 this is the exact indicator.
inline double matched_likelihood(double epsilon) { return 1.0 - epsilon; }
inline double mismatched_likelihood(double epsilon) { return epsilon; }

}  // namespace oas
