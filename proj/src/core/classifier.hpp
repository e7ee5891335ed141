#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace hybridchain {

// Logistic scorer over attribute vectors. Weights act on standardized
// attributes; the standardization constants travel with the weights so
// exported weights reload exactly.
struct WeightVector {
    std::array<double, 5> weights{};
    double bias = 0.0;
    std::array<double, 5> mean{};
    std::array<double, 5> scale{1.0, 1.0, 1.0, 1.0, 1.0};

    std::string to_record() const;  // plain numeric line, round-trips exactly
    static WeightVector from_record(const std::string& line);
};

struct ThresholdParams {
    double mu1 = 1.0;
    double mu2 = 0.5;
};

struct TrainingExample {
    AttributeVector attributes;
    std::uint8_t label = 0;  // consensus outcome V, or ground truth for bootstrap
};

struct TrainOptions {
    double ridge = 1e-4;
    int iterations = 600;
    double step = 0.5;  // safe for standardized features (smoothness < 2)
};

double sigmoid(double z);

// sigma(standardize(a)^T w + bias)
double score(const AttributeVector& a, const WeightVector& y);

// (eta1, eta2) = (mu1 - sigma/2, mu2 - sigma/2); eta1 - eta2 == mu1 - mu2 always.
std::pair<double, double> thresholds(const AttributeVector& a, const WeightVector& y,
                                     const ThresholdParams& params);

// Mean binary cross-entropy + ridge/2 * |w|^2 on standardized attributes.
double loss(const std::vector<TrainingExample>& examples, const WeightVector& y, double ridge);

// Analytic gradient (d/dw1..5, d/dbias) of loss(), for the training loop and
// the finite-difference check.
std::array<double, 6> gradient(const std::vector<TrainingExample>& examples, const WeightVector& y,
                               double ridge);

// Full-batch gradient descent on the BCE objective. Deterministic. Returns
// nothing when the input is degenerate (empty or single-class): callers keep
// their previous weights.
std::optional<WeightVector> train(const std::vector<TrainingExample>& examples, const TrainOptions& opt);

// Retraining every `cadence` epochs on the validator's decided-transaction
// window; returns nothing off-cadence or when train() declines.
std::optional<WeightVector> retrain_epoch_hook(const std::vector<TrainingExample>& window, long epoch,
                                               int cadence, const TrainOptions& opt);

}  // namespace hybridchain
