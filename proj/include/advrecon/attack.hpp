#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "advrecon/neural.hpp"
#include "advrecon/types.hpp"

namespace advrecon {

// Uniform view of a reconstructor for attack purposes: the reconstruction from
// a measurement and the gradient of the squared reconstruction error
// ||rec(y) - x0||^2 with respect to the measurement. Linear and neural models
// are interchangeable behind this pair.
struct AttackModel {
  std::function<Vec(const Vec& y)> reconstruct;
  std::function<Vec(const Vec& y, const Vec& x0)> error_gradient;
  Index measurement_dim = 0;
  Index signal_dim = 0;
};

// x_hat = B y; owns a copy of B.
AttackModel linear_attack_model(const Mat& B);

// x_hat = f(A^T y); owns copies of f and A.
AttackModel neural_attack_model(const Mlp& f, const Mat& A);

struct AttackConfig {
  double epsilon = 0.0;
  Index steps = 100;
  double step_size = 0.0; // 0 selects 2.5 * epsilon / steps
  double momentum = 0.9;
  Index restarts = 2; // first from delta = 0, the rest random inside the ball
  std::uint64_t seed = 0;

  void validate() const;
  double effective_step() const;
};

struct AttackResult {
  Vec delta;        // ||delta|| <= epsilon
  double delta_max; // ||rec(A x0 + delta) - x0||^2 at the best visited delta
};

// Projected gradient ascent with momentum on the squared reconstruction error
// over the epsilon-ball in measurement space. Gradients are normalized before
// the momentum accumulation; each iterate is projected back onto the ball, and
// the best visited point across all restarts is returned. A restart whose loss
// turns non-finite is abandoned; if no restart ever sees a finite loss the
// attack throws.
AttackResult pga_attack(const AttackModel& model, const Mat& A, const Vec& x0,
                        const AttackConfig& cfg);

// RNG stream seed rho_hat assigns to one sample, so per-sample results can be
// reproduced in isolation (and computed in any order or in parallel).
std::uint64_t sample_stream_seed(std::uint64_t seed, Index sample_id);

struct RobustnessRecord {
  Index sample_id;
  double epsilon;
  double delta_max;
};

struct RobustnessReport {
  std::vector<RobustnessRecord> per_sample;          // one row per (sample, epsilon)
  std::vector<std::pair<double, double>> rho_hat;    // (epsilon, mean delta_max)
  Index sample_count = 0;
};

// Worst-case error per sample and its mean over the test set, for each budget
// in epsilon_list. cfg.epsilon is overridden by the list entries; each sample
// attacks under an independent RNG stream derived from (cfg.seed, sample_id),
// so results do not depend on evaluation order.
RobustnessReport rho_hat(const AttackModel& model, const Mat& A, const Mat& testset,
                         const std::vector<double>& epsilon_list, const AttackConfig& cfg);

struct XSpaceAttackConfig {
  double lambda_reg = 1.0; // norm penalty weight
  Index steps = 200;
  double step_size = 0.05;
  std::uint64_t seed = 0;

  void validate() const;
};

struct XSpaceAttackResult {
  Vec r;            // signal-space perturbation
  Vec y_delta;      // its measurement-space image A r
  double objective; // (1/2)||rec(A(x0 + r)) - x0||^2 - (lambda/2)||r||^2
};

// Gradient ascent on the signal-space attack objective
//   Q(r) = (1/2)||rec(A x0 + A r) - x0||^2 - (lambda_reg/2)||r||^2
// from r = 0, tracking the best visited point. Perturbations reach the
// measurement only through A, so they are confined to its range space.
XSpaceAttackResult xspace_attack(const AttackModel& model, const Mat& A, const Vec& x0,
                                 const XSpaceAttackConfig& cfg);

} // namespace advrecon
