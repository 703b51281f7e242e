#include "advrecon/attack.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

namespace advrecon {

namespace {

void check_geometry(const AttackModel& model, const Mat& A, const Vec& x0, const char* who) {
  if (!model.reconstruct || !model.error_gradient)
    throw std::invalid_argument(std::string(who) + ": model callbacks not set");
  if (A.rows() != model.measurement_dim || A.cols() != model.signal_dim)
    throw std::invalid_argument(std::string(who) + ": operator shape does not match the model");
  if (!A.allFinite()) throw std::invalid_argument(std::string(who) + ": non-finite operator entries");
  if (x0.size() != model.signal_dim)
    throw std::invalid_argument(std::string(who) + ": signal length must equal n");
}

// Uniform draw from the radius-eps ball: normal direction, u^(1/m) radius.
Vec ball_point(Index m, double eps, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec v(m);
  for (Index i = 0; i < m; ++i) v(i) = gauss(rng);
  const double norm = v.norm();
  if (norm == 0.0) return Vec::Zero(m);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return v * (eps * std::pow(unif(rng), 1.0 / double(m)) / norm);
}

} // namespace

AttackModel linear_attack_model(const Mat& B) {
  if (B.rows() < 1 || B.cols() < 1)
    throw std::invalid_argument("linear_attack_model: empty matrix");
  if (!B.allFinite()) throw std::invalid_argument("linear_attack_model: non-finite entries");
  auto shared = std::make_shared<const Mat>(B);
  AttackModel model;
  model.measurement_dim = B.cols();
  model.signal_dim = B.rows();
  model.reconstruct = [shared](const Vec& y) -> Vec { return *shared * y; };
  model.error_gradient = [shared](const Vec& y, const Vec& x0) -> Vec {
    return 2.0 * (shared->transpose() * (*shared * y - x0));
  };
  return model;
}

AttackModel neural_attack_model(const Mlp& f, const Mat& A) {
  if (A.cols() != f.input_dim())
    throw std::invalid_argument("neural_attack_model: operator columns must equal the input width");
  struct State {
    Mlp f;
    Mat A;
  };
  auto shared = std::make_shared<const State>(State{f, A});
  AttackModel model;
  model.measurement_dim = A.rows();
  model.signal_dim = f.output_dim();
  model.reconstruct = [shared](const Vec& y) -> Vec {
    return reconstruct(shared->f, shared->A, y);
  };
  model.error_gradient = [shared](const Vec& y, const Vec& x0) -> Vec {
    ForwardCache cache;
    const Mat rec = mlp_forward(shared->f, shared->A.transpose() * y, &cache);
    const Mat upstream = 2.0 * (rec - x0);
    Mat input_gradient;
    mlp_backward(shared->f, cache, upstream, &input_gradient);
    return shared->A * input_gradient;
  };
  return model;
}

void AttackConfig::validate() const {
  if (!(epsilon >= 0)) throw std::invalid_argument("AttackConfig: epsilon must be non-negative");
  if (steps < 1) throw std::invalid_argument("AttackConfig: steps must be positive");
  if (!(step_size >= 0))
    throw std::invalid_argument("AttackConfig: step_size must be non-negative (0 selects the default)");
  if (!(momentum >= 0) || !(momentum < 1))
    throw std::invalid_argument("AttackConfig: momentum must lie in [0, 1)");
  if (restarts < 1) throw std::invalid_argument("AttackConfig: restarts must be positive");
}

double AttackConfig::effective_step() const {
  return step_size > 0 ? step_size : 2.5 * epsilon / double(steps);
}

AttackResult pga_attack(const AttackModel& model, const Mat& A, const Vec& x0,
                        const AttackConfig& cfg) {
  cfg.validate();
  check_geometry(model, A, x0, "pga_attack");
  const Index m = model.measurement_dim;
  const Vec y0 = A * x0;
  const double step = cfg.effective_step();

  std::mt19937_64 rng(cfg.seed);
  double best = -std::numeric_limits<double>::infinity();
  Vec best_delta = Vec::Zero(m);
  bool found = false;

  for (Index restart = 0; restart < cfg.restarts; ++restart) {
    Vec delta = (restart == 0) ? Vec(Vec::Zero(m)) : ball_point(m, cfg.epsilon, rng);
    Vec velocity = Vec::Zero(m);
    for (Index it = 0; it <= cfg.steps; ++it) {
      const double value = (model.reconstruct(y0 + delta) - x0).squaredNorm();
      if (!std::isfinite(value)) break; // abandon this restart
      found = true;
      if (value > best) {
        best = value;
        best_delta = delta;
      }
      if (it == cfg.steps || cfg.epsilon == 0.0) break;
      Vec grad = model.error_gradient(y0 + delta, x0);
      const double gnorm = grad.norm();
      if (!std::isfinite(gnorm)) break;
      if (gnorm > 0) grad /= gnorm;
      velocity = cfg.momentum * velocity + grad;
      delta += step * velocity;
      const double dnorm = delta.norm();
      if (dnorm > cfg.epsilon) delta *= cfg.epsilon / dnorm;
    }
    if (cfg.epsilon == 0.0) break; // every restart collapses to the clean point
  }
  if (!found) throw std::runtime_error("pga_attack: loss is non-finite at every evaluated point");
  return {best_delta, best};
}

std::uint64_t sample_stream_seed(std::uint64_t seed, Index sample_id) {
  // splitmix64 finalizer so neighboring sample ids land on distant streams
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (std::uint64_t(sample_id) + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

RobustnessReport rho_hat(const AttackModel& model, const Mat& A, const Mat& testset,
                         const std::vector<double>& epsilon_list, const AttackConfig& cfg) {
  cfg.validate();
  if (testset.cols() < 1) throw std::invalid_argument("rho_hat: testset must be non-empty");
  if (testset.rows() != model.signal_dim)
    throw std::invalid_argument("rho_hat: testset rows must equal the signal dimension");
  if (epsilon_list.empty()) throw std::invalid_argument("rho_hat: epsilon_list must be non-empty");
  for (double eps : epsilon_list)
    if (!(eps >= 0)) throw std::invalid_argument("rho_hat: epsilon must be non-negative");

  RobustnessReport report;
  report.sample_count = testset.cols();
  report.per_sample.reserve(epsilon_list.size() * std::size_t(testset.cols()));
  for (double eps : epsilon_list) {
    double acc = 0.0;
    for (Index i = 0; i < testset.cols(); ++i) {
      AttackConfig sample_cfg = cfg;
      sample_cfg.epsilon = eps;
      sample_cfg.seed = sample_stream_seed(cfg.seed, i);
      const AttackResult res = pga_attack(model, A, testset.col(i), sample_cfg);
      report.per_sample.push_back({i, eps, res.delta_max});
      acc += res.delta_max;
    }
    report.rho_hat.emplace_back(eps, acc / double(testset.cols()));
  }
  return report;
}

void XSpaceAttackConfig::validate() const {
  if (!(lambda_reg > 0))
    throw std::invalid_argument("XSpaceAttackConfig: lambda_reg must be positive");
  if (steps < 1) throw std::invalid_argument("XSpaceAttackConfig: steps must be positive");
  if (!(step_size > 0)) throw std::invalid_argument("XSpaceAttackConfig: step_size must be positive");
}

XSpaceAttackResult xspace_attack(const AttackModel& model, const Mat& A, const Vec& x0,
                                 const XSpaceAttackConfig& cfg) {
  cfg.validate();
  check_geometry(model, A, x0, "xspace_attack");
  const Vec y0 = A * x0;

  Vec r = Vec::Zero(model.signal_dim);
  Vec best_r = r;
  double best = -std::numeric_limits<double>::infinity();
  bool found = false;
  for (Index it = 0; it <= cfg.steps; ++it) {
    const Vec y = y0 + A * r;
    const double value = 0.5 * (model.reconstruct(y) - x0).squaredNorm()
                       - 0.5 * cfg.lambda_reg * r.squaredNorm();
    if (!std::isfinite(value)) break;
    found = true;
    if (value > best) {
      best = value;
      best_r = r;
    }
    if (it == cfg.steps) break;
    const Vec grad = 0.5 * (A.transpose() * model.error_gradient(y, x0)) - cfg.lambda_reg * r;
    if (!grad.allFinite()) break;
    r += cfg.step_size * grad;
  }
  if (!found)
    throw std::runtime_error("xspace_attack: objective is non-finite at the clean point");
  return {best_r, Vec(A * best_r), best};
}

} // namespace advrecon
