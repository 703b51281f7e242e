#include "advrecon/linear_trainer.hpp"

#include <random>

#include "advrecon/theory.hpp"

namespace advrecon {

namespace {

void validate(const LinearTrainConfig& cfg) {
  if (!(cfg.lambda > 0)) throw std::invalid_argument("train_minmax_linear: lambda must be positive");
  if (!(cfg.epsilon >= 0))
    throw std::invalid_argument("train_minmax_linear: epsilon must be non-negative");
  if (!(cfg.learning_rate > 0))
    throw std::invalid_argument("train_minmax_linear: learning_rate must be positive");
  if (!(cfg.momentum >= 0 && cfg.momentum < 1))
    throw std::invalid_argument("train_minmax_linear: momentum must be in [0,1)");
  if (cfg.epochs <= 0) throw std::invalid_argument("train_minmax_linear: epochs must be positive");
  if (cfg.batch_size <= 0)
    throw std::invalid_argument("train_minmax_linear: batch_size must be positive");
}

} // namespace

std::pair<double, Mat> linear_minmax_loss(const Mat& B, const Mat& X, const Mat& Y, double lambda,
                                          const Vec& delta) {
  const double inv = 1.0 / double(X.cols());
  const Mat clean_res = B * Y - X;
  const Mat adv_in = Y.colwise() + delta;
  const Mat adv_res = B * adv_in - X;
  const double loss = inv * (clean_res.squaredNorm() + lambda * adv_res.squaredNorm());
  Mat grad = 2.0 * inv * (clean_res * Y.transpose() + lambda * adv_res * adv_in.transpose());
  return {loss, std::move(grad)};
}

LinearTrainResult train_minmax_linear(const MeasurementOperatorD& op, const Dataset& data,
                                      const LinearTrainConfig& cfg) {
  validate(cfg);
  if (data.n != op.n)
    throw std::invalid_argument("train_minmax_linear: dataset dimension does not match operator");
  const Index N = data.count();
  const Index bs = std::min(cfg.batch_size, N);
  const Index n = op.n, m = op.m;

  std::mt19937_64 rng(static_cast<std::uint64_t>(cfg.seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Index> perm(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;

  LinearTrainResult out;
  out.B = Mat::Zero(n, m);
  Mat velocity = Mat::Zero(n, m);
  Mat X(n, bs), Y(m, bs);
  out.loss_history.reserve(static_cast<std::size_t>(cfg.epochs));

  for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (Index i = N - 1; i > 0; --i) {
      const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
      std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    }
    double total = 0;
    Index batches = 0;
    for (Index start = 0; start + bs <= N; start += bs) {
      for (Index k = 0; k < bs; ++k)
        X.col(k) = data.samples.col(perm[static_cast<std::size_t>(start + k)]);
      Y.noalias() = op.entries * X;
      if (data.sigma_noise > 0)
        for (Index k = 0; k < bs; ++k)
          for (Index r = 0; r < m; ++r) Y(r, k) += data.sigma_noise * gauss(rng);
      const Vec delta = worst_case_delta_linear(out.B, cfg.epsilon);
      auto [loss, grad] = linear_minmax_loss(out.B, X, Y, cfg.lambda, delta);
      velocity = cfg.momentum * velocity + grad;
      out.B -= cfg.learning_rate * velocity;
      total += loss;
      ++batches;
    }
    const double epoch_loss = total / double(batches);
    if (!std::isfinite(epoch_loss) || epoch_loss > 1e6)
      throw std::runtime_error("train_minmax_linear: diverged at epoch " +
                               std::to_string(epoch) + " (loss " + std::to_string(epoch_loss) +
                               "); reduce the learning rate");
    out.loss_history.push_back(epoch_loss);
  }
  return out;
}

LinearComparisonReport compare_linear(const Mat& B_hat, const Mat& B_theory, const Mat& A_tilde) {
  if (B_hat.rows() != B_theory.rows() || B_hat.cols() != B_theory.cols())
    throw std::invalid_argument("compare_linear: shape mismatch between reconstructors");
  if (A_tilde.rows() != B_theory.cols() || A_tilde.cols() != B_theory.rows())
    throw std::invalid_argument("compare_linear: operator shape incompatible");
  auto kappa = [](const Mat& B) {
    Eigen::JacobiSVD<Mat> svd(B);
    const auto& sv = svd.singularValues();
    return sv(0) / sv(sv.size() - 1);
  };
  const Index n = B_theory.rows();
  const Mat I = Mat::Identity(n, n);
  LinearComparisonReport rep;
  rep.rel_frobenius = (B_hat - B_theory).norm() / B_theory.norm();
  Eigen::JacobiSVD<Mat> diff(B_hat - B_theory);
  Eigen::JacobiSVD<Mat> base(B_theory);
  rep.rel_spectral = diff.singularValues()(0) / base.singularValues()(0);
  rep.identity_ratio = (I - B_theory * A_tilde).norm() / (I - B_hat * A_tilde).norm();
  rep.kappa_theory = kappa(B_theory);
  rep.kappa_trained = kappa(B_hat);
  return rep;
}

} // namespace advrecon
