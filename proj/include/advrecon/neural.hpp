#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "advrecon/types.hpp"

namespace advrecon {

enum class OutputActivation : std::uint8_t { Tanh = 0, Linear = 1 };

// Fully-connected network with ReLU hidden layers. Reconstructors use a tanh
// output (range-matched to data in [-1, 1]); perturbation generators use a
// linear output so the perturbation norm is unconstrained by the activation.
struct Mlp {
  std::vector<Mat> weights; // weights[l] maps layer l to layer l+1
  std::vector<Vec> biases;
  OutputActivation output = OutputActivation::Tanh;

  Index input_dim() const { return weights.empty() ? 0 : weights.front().cols(); }
  Index output_dim() const { return weights.empty() ? 0 : weights.back().rows(); }
  std::vector<Index> layer_dims() const;
};

// Glorot-uniform weights, zero biases.
Mlp init_mlp(const std::vector<Index>& dims, OutputActivation output, std::uint64_t seed);

struct ForwardCache {
  std::vector<Mat> activations;     // activations[0] is the input, back() the output
  std::vector<Mat> preactivations;  // one per layer
};

// input is d x batch. ReLU derivative at exactly 0 is taken as 0.
Mat mlp_forward(const Mlp& net, const Mat& input, ForwardCache* cache = nullptr);

struct MlpGradients {
  std::vector<Mat> weights;
  std::vector<Vec> biases;
};

MlpGradients zero_gradients(const Mlp& net);

// upstream is dLoss/dOutput for the batch the cache was built from. Optionally
// also yields dLoss/dInput (for chaining through the generator).
MlpGradients mlp_backward(const Mlp& net, const ForwardCache& cache, const Mat& upstream,
                          Mat* input_gradient = nullptr);

struct AdamState {
  std::vector<Mat> m_weights, v_weights;
  std::vector<Vec> m_biases, v_biases;
  long step_count = 0;
};

AdamState adam_init(const Mlp& net);

// Bias-corrected Adam update. direction +1 descends, -1 ascends.
void adam_step(Mlp& net, AdamState& state, const MlpGradients& grads, double learning_rate,
               double beta1, double beta2, int direction = +1);

// x_hat = f(A^T y): measurements are lifted to signal space by the adjoint
// before entering the network.
Vec reconstruct(const Mlp& f, const Mat& A, const Vec& y);
Mat reconstruct_batch(const Mlp& f, const Mat& A, const Mat& Y);

// max{0, ||delta||^2 - epsilon^2}. Gradient is 2*delta outside the ball, 0 on
// and inside it.
double hinge_penalty(const Vec& delta, double epsilon);

// Mean over all entries of the squared residual. Per-sample reconstruction
// losses throughout this module are means over signal components, so the
// penalty weights below stay comparable across signal sizes.
double mean_squared_error(const Mat& predictions, const Mat& targets);

struct AdvTrainConfig {
  double lambda1 = 1.0;   // weight of the adversarial reconstruction term
  double lambda2 = -0.1;  // hinge coefficient in the generator objective, negative
  double epsilon = 2.0;   // perturbation budget
  Index K = 4;            // generator updates per mini-batch; must divide batch_size
  double adam_beta1 = 0.5;
  double adam_beta2 = 0.999;
  double learning_rate = 1e-4;
  Index batch_size = 128;
  Index epochs = 100;
  Index warmup_epochs = 10; // clean-only epochs with the generator frozen
  std::uint64_t seed = 0;

  void validate() const;
};

// Gradient w.r.t. the generator weights of the ascent objective on one batch
// part: lambda1 * mean_i mse(f(A^T(y_i + G(y_i))), x_i)
//       + lambda2 * mean_i hinge(G(y_i)).
// f is frozen; the caller ascends by passing direction -1 to adam_step.
MlpGradients generator_objective_gradient(const Mlp& f, const Mlp& generator, const Mat& A,
                                          const Mat& x, const Mat& y, double lambda1,
                                          double lambda2, double epsilon);

// Gradient w.r.t. the reconstructor weights of
//   mean_i mse(f(A^T y_i), x_i) + lambda1 * mean_i mse(f(A^T(y_i + delta_i)), x_i).
MlpGradients reconstructor_objective_gradient(const Mlp& f, const Mat& A, const Mat& x,
                                              const Mat& y, const Mat& deltas, double lambda1);

// sum over layers of ||W^T W - I||_F^2, and its gradient contribution
// (beta/2) * d/dW of that sum, i.e. 2*beta*W*(W^T W - I) per layer.
double parseval_penalty(const Mlp& net);
void add_parseval_gradient(const Mlp& net, double beta, MlpGradients& grads);
void add_weight_decay_gradient(const Mlp& net, double mu, MlpGradients& grads);

struct TrainHistory {
  std::vector<double> clean_loss;    // per-epoch batch means
  std::vector<double> adv_loss;      // zero during warm-up epochs
  std::vector<double> gen_norm_mean; // mean ||G(y)|| over the epoch, zero during warm-up
};

struct AdvTrainResult {
  Mlp f;
  Mlp generator;
  TrainHistory history;
};

// Alternating min-max training. Each mini-batch is split into K parts; per
// part the generator takes one Adam ascent step (reconstructor frozen) and its
// post-update perturbations are collected; the reconstructor then takes one
// Adam descent step on clean + lambda1 * adversarial loss over the full batch.
// The generator persists across batches and epochs. During the first
// warmup_epochs the generator is untouched and only the clean term trains f.
// dataset is n x count with samples as columns, entries in [-1, 1].
AdvTrainResult adv_train(Mlp f, Mlp generator, const Mat& A, const Mat& dataset,
                         const AdvTrainConfig& cfg);

enum class BaselineVariant : std::uint8_t { Plain = 0, WeightDecay = 1, Parseval = 2 };

struct BaselineConfig {
  BaselineVariant variant = BaselineVariant::Plain;
  double mu = 0.0;   // weight decay coefficient, WeightDecay only
  double beta = 0.0; // orthogonality penalty coefficient, Parseval only

  // mu/beta must be zero unless the matching variant is selected; zero with
  // the matching variant is allowed and degenerates to Plain.
  void validate() const;
};

struct BaselineTrainResult {
  Mlp f;
  TrainHistory history; // adversarial columns stay zero
};

// Clean-loss training with optional weight decay mu*||theta||^2 or Parseval
// penalty (beta/2) * sum_l ||W_l^T W_l - I||_F^2. Optimizer settings (learning
// rate, betas, batch size, epochs, seed) are taken from `optimizer`; its
// adversarial fields are ignored.
BaselineTrainResult train_baseline(Mlp f, const Mat& A, const Mat& dataset,
                                   const BaselineConfig& variant,
                                   const AdvTrainConfig& optimizer);

void checkpoint_save(const Mlp& net, const std::string& path);
Mlp checkpoint_load(const std::string& path);

} // namespace advrecon
