#include "oas/filter.hpp"

#include <cmath>

namespace oas {

BeliefState uniform_belief(int n) {
    if (n <= 0) throw Error(ErrorCode::kInvalidArgument, "belief size must be positive");
    BeliefState b;
    b.probs.assign(static_cast<std::size_t>(n), 1.0 / n);
    return b;
}

void validate_belief(const BeliefState& b) {
    if (b.probs.empty()) throw Error(ErrorCode::kValidation, "belief is empty");
    double sum = 0.0;
    for (double p : b.probs) {
        if (!std::isfinite(p) || p < 0.0) {
            throw Error(ErrorCode::kValidation, "belief entries must be finite and >= 0");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kBeliefTolerance) {
        throw Error(ErrorCode::kValidation, "belief does not sum to 1");
    }
}

AbstractionTransitionModel AbstractionTransitionModel::stay(int n, double stay_prob) {
    if (n <= 0) throw Error(ErrorCode::kInvalidArgument, "transition model size must be positive");
    if (stay_prob < 0.0 || stay_prob > 1.0) {
        throw Error(ErrorCode::kInvalidArgument, "stay probability must be in [0, 1]");
    }
    AbstractionTransitionModel model;
    model.n = n;
    const double off = n > 1 ? (1.0 - stay_prob) / (n - 1) : 0.0;
    model.matrix.assign(static_cast<std::size_t>(n) * n, off);
    for (int i = 0; i < n; ++i) {
        model.matrix[static_cast<std::size_t>(i) * n + i] = n > 1 ? stay_prob : 1.0;
    }
    return model;
}

AbstractionTransitionModel AbstractionTransitionModel::from_matrix(int n,
                                                                   std::vector<double> matrix) {
    if (n <= 0 || matrix.size() != static_cast<std::size_t>(n) * n) {
        throw Error(ErrorCode::kInvalidArgument, "transition model matrix must be n x n");
    }
    for (int j = 0; j < n; ++j) {
        double col = 0.0;
        for (int i = 0; i < n; ++i) {
            const double v = matrix[static_cast<std::size_t>(i) * n + j];
            if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                throw Error(ErrorCode::kValidation, "transition model entries must be in [0, 1]");
            }
            col += v;
        }
        if (std::abs(col - 1.0) > kBeliefTolerance) {
            throw Error(ErrorCode::kValidation, "transition model columns must sum to 1");
        }
    }
    AbstractionTransitionModel model;
    model.n = n;
    model.matrix = std::move(matrix);
    return model;
}

BeliefState dynamics_update(const BeliefState& b, const AbstractionTransitionModel& model) {
    validate_belief(b);
    if (model.n != b.size()) {
        throw Error(ErrorCode::kInvalidArgument, "belief / transition model size mismatch");
    }
    BeliefState out;
    out.step = b.step;
    out.probs.assign(b.probs.size(), 0.0);
    for (int i = 0; i < model.n; ++i) {
        double acc = 0.0;
        for (int j = 0; j < model.n; ++j) {
            acc += model.at(i, j) * b.probs[static_cast<std::size_t>(j)];
        }
        out.probs[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

MeasurementResult measurement_update(const BeliefState& b, std::span<const double> likelihoods) {
    validate_belief(b);
    if (likelihoods.size() != b.probs.size()) {
        throw Error(ErrorCode::kInvalidArgument, "belief / likelihood size mismatch");
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < likelihoods.size(); ++i) {
        if (!std::isfinite(likelihoods[i]) || likelihoods[i] < 0.0) {
            throw Error(ErrorCode::kInvalidArgument, "likelihoods must be finite and >= 0");
        }
        norm += likelihoods[i] * b.probs[i];
    }
    if (norm == 0.0) {
        // Every catalog member is ruled out (possible only with zero
        // smoothing); keep the prior and signal the skip.
        return MeasurementResult{b, true};
    }
    MeasurementResult result;
    result.belief.step = b.step;
    result.belief.probs.resize(b.probs.size());
    for (std::size_t i = 0; i < b.probs.size(); ++i) {
        result.belief.probs[i] = likelihoods[i] * b.probs[i] / norm;
    }
    return result;
}

int ml_abstraction(const BeliefState& b) {
    validate_belief(b);
    int best = 0;
    for (int i = 1; i < b.size(); ++i) {
        if (b.probs[static_cast<std::size_t>(i)] > b.probs[static_cast<std::size_t>(best)]) {
            best = i;  // strict: ties resolve to the lowest index
        }
    }
    return best;
}

OasStepResult oas_step(const BeliefState& b, const AbstractionTransitionModel& model,
                       std::span<const double> likelihoods) {
    const BeliefState predicted = dynamics_update(b, model);
    MeasurementResult measured = measurement_update(predicted, likelihoods);
    OasStepResult result;
    result.belief = std::move(measured.belief);
    result.belief.step = b.step + 1;
    result.degenerate = measured.degenerate;
    result.ml = ml_abstraction(result.belief);
    return result;
}

}  // namespace oas
