#pragma once

#include <vector>

#include "advrecon/data_io.hpp"
#include "advrecon/measurement.hpp"
#include "advrecon/types.hpp"

namespace advrecon {

struct LinearTrainConfig {
  double lambda = 1.0;        // > 0
  double epsilon = 0.1;       // >= 0
  double learning_rate = 1e-3; // > 0
  double momentum = 0.9;      // in [0, 1)
  Index epochs = 200;         // > 0
  Index batch_size = 128;     // > 0
  std::int64_t seed = 0;
};

struct LinearTrainResult {
  Mat B; // n x m
  std::vector<double> loss_history; // per-epoch mean batch loss
};

struct LinearComparisonReport {
  double rel_frobenius = 0; // ||Bhat - B||_F / ||B||_F
  double rel_spectral = 0;  // ||Bhat - B||_2 / ||B||_2
  double identity_ratio = 0; // ||I - B A||_F / ||I - Bhat A||_F
  double kappa_theory = 0;
  double kappa_trained = 0;
};

// Mini-batch loss and gradient of L(B) = mean ||B y - x||^2 + lambda * mean
// ||B (y + delta) - x||^2 with delta held fixed (Danskin-style). X is n x
// batch, Y = A X.
std::pair<double, Mat> linear_minmax_loss(const Mat& B, const Mat& X, const Mat& Y,
                                          double lambda, const Vec& delta);

// SGD with momentum from zero init; the inner maximizer is recomputed in
// closed form every step.
LinearTrainResult train_minmax_linear(const MeasurementOperatorD& op, const Dataset& data,
                                      const LinearTrainConfig& cfg);

LinearComparisonReport compare_linear(const Mat& B_hat, const Mat& B_theory, const Mat& A_tilde);

} // namespace advrecon
