#include "advrecon/neural.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <random>
#include <utility>
#include <vector>

namespace advrecon {

namespace {

constexpr double kAdamEpsilon = 1e-8;
constexpr double kDivergenceCeiling = 1e6;
constexpr char kMagic[] = "ADVRECON-NET"; // stored with its trailing NUL
constexpr std::uint8_t kVersion = 1;
constexpr std::uint8_t kTagRelu = 0, kTagTanh = 1, kTagLinear = 2;

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

void check_net(const Mlp& net, const char* who) {
  if (net.weights.empty() || net.weights.size() != net.biases.size())
    throw std::invalid_argument(std::string(who) + ": empty or inconsistent network");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    if (net.biases[l].size() != net.weights[l].rows())
      throw std::invalid_argument(std::string(who) + ": bias length does not match layer rows");
    if (l + 1 < net.weights.size() && net.weights[l + 1].cols() != net.weights[l].rows())
      throw std::invalid_argument(std::string(who) + ": consecutive layer dims incompatible");
  }
}

} // namespace

std::vector<Index> Mlp::layer_dims() const {
  std::vector<Index> dims;
  if (weights.empty()) return dims;
  dims.push_back(weights.front().cols());
  for (const auto& w : weights) dims.push_back(w.rows());
  return dims;
}

Mlp init_mlp(const std::vector<Index>& dims, OutputActivation output, std::uint64_t seed) {
  require(dims.size() >= 2, "init_mlp: need an input and an output dimension");
  for (Index d : dims) require(d > 0, "init_mlp: dims must be positive");

  std::mt19937_64 rng(seed);
  Mlp net;
  net.output = output;
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const Index fan_in = dims[l], fan_out = dims[l + 1];
    const double limit = std::sqrt(6.0 / double(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    Mat w(fan_out, fan_in);
    for (Index i = 0; i < fan_out; ++i)
      for (Index j = 0; j < fan_in; ++j) w(i, j) = uniform(rng);
    net.weights.push_back(std::move(w));
    net.biases.push_back(Vec::Zero(fan_out));
  }
  return net;
}

Mat mlp_forward(const Mlp& net, const Mat& input, ForwardCache* cache) {
  check_net(net, "mlp_forward");
  require(input.rows() == net.input_dim(), "mlp_forward: input dimension mismatch");

  if (cache) {
    cache->activations.clear();
    cache->preactivations.clear();
    cache->activations.push_back(input);
  }
  const std::size_t layers = net.weights.size();
  Mat h = input;
  for (std::size_t l = 0; l < layers; ++l) {
    Mat z = (net.weights[l] * h).colwise() + net.biases[l];
    if (l + 1 < layers)
      h = z.cwiseMax(0.0);
    else if (net.output == OutputActivation::Tanh)
      h = z.array().tanh();
    else
      h = z;
    if (cache) {
      cache->preactivations.push_back(std::move(z));
      cache->activations.push_back(h);
    }
  }
  return h;
}

MlpGradients zero_gradients(const Mlp& net) {
  MlpGradients g;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    g.weights.push_back(Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    g.biases.push_back(Vec::Zero(net.biases[l].size()));
  }
  return g;
}

MlpGradients mlp_backward(const Mlp& net, const ForwardCache& cache, const Mat& upstream,
                          Mat* input_gradient) {
  check_net(net, "mlp_backward");
  const std::size_t layers = net.weights.size();
  require(cache.activations.size() == layers + 1 && cache.preactivations.size() == layers,
          "mlp_backward: cache does not match network");
  require(upstream.rows() == net.output_dim() && upstream.cols() == cache.activations[0].cols(),
          "mlp_backward: upstream dimension mismatch");

  MlpGradients grads;
  grads.weights.resize(layers);
  grads.biases.resize(layers);
  Mat dh = upstream;
  for (std::size_t l = layers; l-- > 0;) {
    Mat dz;
    if (l + 1 < layers)
      dz = dh.cwiseProduct((cache.preactivations[l].array() > 0.0).cast<double>().matrix());
    else if (net.output == OutputActivation::Tanh)
      dz = dh.cwiseProduct(
          (1.0 - cache.activations[l + 1].array().square()).matrix());
    else
      dz = dh;
    grads.weights[l] = dz * cache.activations[l].transpose();
    grads.biases[l] = dz.rowwise().sum();
    if (l > 0 || input_gradient) dh = net.weights[l].transpose() * dz;
  }
  if (input_gradient) *input_gradient = dh;
  return grads;
}

AdamState adam_init(const Mlp& net) {
  AdamState st;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    st.m_weights.push_back(Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    st.v_weights.push_back(Mat::Zero(net.weights[l].rows(), net.weights[l].cols()));
    st.m_biases.push_back(Vec::Zero(net.biases[l].size()));
    st.v_biases.push_back(Vec::Zero(net.biases[l].size()));
  }
  return st;
}

void adam_step(Mlp& net, AdamState& state, const MlpGradients& grads, double learning_rate,
               double beta1, double beta2, int direction) {
  require(direction == 1 || direction == -1, "adam_step: direction must be +1 or -1");
  require(state.m_weights.size() == net.weights.size() &&
              grads.weights.size() == net.weights.size(),
          "adam_step: state or gradient shape mismatch");
  state.step_count += 1;
  const double t = double(state.step_count);
  const double corr1 = 1.0 - std::pow(beta1, t);
  const double corr2 = 1.0 - std::pow(beta2, t);
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    auto update = [&](auto& param, auto& m, auto& v, const auto& g) {
      m = beta1 * m + (1.0 - beta1) * g;
      v = beta2 * v + (1.0 - beta2) * g.cwiseProduct(g);
      param -= (double(direction) * learning_rate) *
               ((m / corr1).array() / ((v / corr2).array().sqrt() + kAdamEpsilon)).matrix();
    };
    update(net.weights[l], state.m_weights[l], state.v_weights[l], grads.weights[l]);
    update(net.biases[l], state.m_biases[l], state.v_biases[l], grads.biases[l]);
  }
}

Mat reconstruct_batch(const Mlp& f, const Mat& A, const Mat& Y) {
  require(Y.rows() == A.rows(), "reconstruct: measurement length mismatch");
  require(f.input_dim() == A.cols(), "reconstruct: network input does not match signal dimension");
  return mlp_forward(f, A.transpose() * Y);
}

Vec reconstruct(const Mlp& f, const Mat& A, const Vec& y) {
  return reconstruct_batch(f, A, y).col(0);
}

double hinge_penalty(const Vec& delta, double epsilon) {
  require(epsilon >= 0, "hinge_penalty: epsilon must be non-negative");
  const double excess = delta.squaredNorm() - epsilon * epsilon;
  return excess > 0 ? excess : 0.0;
}

double mean_squared_error(const Mat& predictions, const Mat& targets) {
  require(predictions.rows() == targets.rows() && predictions.cols() == targets.cols(),
          "mean_squared_error: shape mismatch");
  return (predictions - targets).squaredNorm() / double(predictions.size());
}

void AdvTrainConfig::validate() const {
  require(lambda1 >= 0, "AdvTrainConfig: lambda1 must be non-negative");
  require(lambda2 < 0, "AdvTrainConfig: lambda2 must be negative");
  require(epsilon > 0, "AdvTrainConfig: epsilon must be positive");
  require(K > 0, "AdvTrainConfig: K must be positive");
  require(batch_size > 0, "AdvTrainConfig: batch_size must be positive");
  require(batch_size % K == 0, "AdvTrainConfig: K must divide batch_size");
  require(adam_beta1 >= 0 && adam_beta1 < 1, "AdvTrainConfig: adam_beta1 must lie in [0, 1)");
  require(adam_beta2 >= 0 && adam_beta2 < 1, "AdvTrainConfig: adam_beta2 must lie in [0, 1)");
  require(learning_rate > 0, "AdvTrainConfig: learning_rate must be positive");
  require(epochs > 0, "AdvTrainConfig: epochs must be positive");
  require(warmup_epochs >= 0, "AdvTrainConfig: warmup_epochs must be non-negative");
}

void BaselineConfig::validate() const {
  require(mu >= 0, "BaselineConfig: mu must be non-negative");
  require(beta >= 0, "BaselineConfig: beta must be non-negative");
  if (variant != BaselineVariant::WeightDecay)
    require(mu == 0, "BaselineConfig: mu only applies to the weight-decay variant");
  if (variant != BaselineVariant::Parseval)
    require(beta == 0, "BaselineConfig: beta only applies to the Parseval variant");
}

namespace {

// gradient of mean_i mse(f(A^T y_i), x_i) w.r.t. theta; also reports the loss
MlpGradients clean_gradient(const Mlp& f, const Mat& A, const Mat& x, const Mat& y,
                            double* loss_out) {
  ForwardCache cache;
  const Mat rec = mlp_forward(f, A.transpose() * y, &cache);
  const Mat upstream = 2.0 * (rec - x) / double(rec.size());
  if (loss_out) *loss_out = (rec - x).squaredNorm() / double(rec.size());
  return mlp_backward(f, cache, upstream);
}

MlpGradients recon_gradient_ex(const Mlp& f, const Mat& A, const Mat& x, const Mat& y,
                               const Mat& deltas, double lambda1, double* clean_out,
                               double* adv_out) {
  MlpGradients grads = clean_gradient(f, A, x, y, clean_out);
  ForwardCache cache;
  const Mat rec = mlp_forward(f, A.transpose() * (y + deltas), &cache);
  const Mat upstream = lambda1 * 2.0 * (rec - x) / double(rec.size());
  if (adv_out) *adv_out = (rec - x).squaredNorm() / double(rec.size());
  const MlpGradients adv = mlp_backward(f, cache, upstream);
  for (std::size_t l = 0; l < grads.weights.size(); ++l) {
    grads.weights[l] += adv.weights[l];
    grads.biases[l] += adv.biases[l];
  }
  return grads;
}

void check_training_inputs(const Mlp& f, const Mat& A, const Mat& dataset, const char* who) {
  check_net(f, who);
  if (A.cols() != dataset.rows())
    throw std::invalid_argument(std::string(who) + ": operator columns must match dataset rows");
  if (f.input_dim() != A.cols() || f.output_dim() != A.cols())
    throw std::invalid_argument(std::string(who) +
                                ": reconstructor dims must match the signal dimension");
  if (dataset.size() == 0)
    throw std::invalid_argument(std::string(who) + ": dataset is empty");
  if (dataset.minCoeff() < -1.0 || dataset.maxCoeff() > 1.0)
    throw std::invalid_argument(std::string(who) + ": dataset must lie in [-1, 1]");
}

void shuffle_indices(std::vector<Index>& perm, std::mt19937_64& rng) {
  for (Index i = Index(perm.size()) - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
}

void gather_batch(const Mat& dataset, const std::vector<Index>& perm, Index start, Mat& out) {
  for (Index j = 0; j < out.cols(); ++j)
    out.col(j) = dataset.col(perm[static_cast<std::size_t>(start + j)]);
}

[[noreturn]] void throw_diverged(const char* who, Index epoch) {
  throw std::runtime_error(std::string(who) + ": diverged at epoch " + std::to_string(epoch) +
                           ", reduce the learning rate");
}

} // namespace

MlpGradients generator_objective_gradient(const Mlp& f, const Mlp& generator, const Mat& A,
                                          const Mat& x, const Mat& y, double lambda1,
                                          double lambda2, double epsilon) {
  check_net(f, "generator_objective_gradient");
  check_net(generator, "generator_objective_gradient");
  require(x.cols() == y.cols() && x.rows() == A.cols() && y.rows() == A.rows(),
          "generator_objective_gradient: batch shape mismatch");
  require(generator.input_dim() == A.rows() && generator.output_dim() == A.rows(),
          "generator_objective_gradient: generator dims must match the measurement dimension");

  const Index count = y.cols();
  ForwardCache gen_cache;
  const Mat deltas = mlp_forward(generator, y, &gen_cache);
  ForwardCache f_cache;
  const Mat rec = mlp_forward(f, A.transpose() * (y + deltas), &f_cache);

  const Mat upstream = lambda1 * 2.0 * (rec - x) / double(rec.size());
  Mat du;
  mlp_backward(f, f_cache, upstream, &du);
  Mat ddelta = A * du;
  for (Index i = 0; i < count; ++i) {
    if (deltas.col(i).squaredNorm() > epsilon * epsilon)
      ddelta.col(i) += (lambda2 * 2.0 / double(count)) * deltas.col(i);
  }
  return mlp_backward(generator, gen_cache, ddelta);
}

MlpGradients reconstructor_objective_gradient(const Mlp& f, const Mat& A, const Mat& x,
                                              const Mat& y, const Mat& deltas, double lambda1) {
  check_net(f, "reconstructor_objective_gradient");
  require(x.cols() == y.cols() && deltas.cols() == y.cols() && x.rows() == A.cols() &&
              y.rows() == A.rows() && deltas.rows() == A.rows(),
          "reconstructor_objective_gradient: batch shape mismatch");
  return recon_gradient_ex(f, A, x, y, deltas, lambda1, nullptr, nullptr);
}

double parseval_penalty(const Mlp& net) {
  check_net(net, "parseval_penalty");
  double total = 0;
  for (const auto& w : net.weights) {
    const Mat gram = w.transpose() * w - Mat::Identity(w.cols(), w.cols());
    total += gram.squaredNorm();
  }
  return total;
}

void add_parseval_gradient(const Mlp& net, double beta, MlpGradients& grads) {
  require(beta >= 0, "add_parseval_gradient: beta must be non-negative");
  require(grads.weights.size() == net.weights.size(), "add_parseval_gradient: shape mismatch");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const Mat& w = net.weights[l];
    grads.weights[l] +=
        2.0 * beta * (w * (w.transpose() * w - Mat::Identity(w.cols(), w.cols())));
  }
}

void add_weight_decay_gradient(const Mlp& net, double mu, MlpGradients& grads) {
  require(mu >= 0, "add_weight_decay_gradient: mu must be non-negative");
  require(grads.weights.size() == net.weights.size(), "add_weight_decay_gradient: shape mismatch");
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    grads.weights[l] += 2.0 * mu * net.weights[l];
    grads.biases[l] += 2.0 * mu * net.biases[l];
  }
}

AdvTrainResult adv_train(Mlp f, Mlp generator, const Mat& A, const Mat& dataset,
                         const AdvTrainConfig& cfg) {
  cfg.validate();
  check_training_inputs(f, A, dataset, "adv_train");
  check_net(generator, "adv_train");
  if (generator.input_dim() != A.rows() || generator.output_dim() != A.rows())
    throw std::invalid_argument("adv_train: generator dims must match the measurement dimension");
  const Index N = dataset.cols();
  if (cfg.batch_size > N) throw std::invalid_argument("adv_train: batch_size exceeds dataset size");

  const Index n = A.cols(), m = A.rows(), bs = cfg.batch_size, part = bs / cfg.K;
  std::mt19937_64 rng(cfg.seed);
  std::vector<Index> perm(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;

  AdamState f_state = adam_init(f);
  AdamState g_state = adam_init(generator);
  AdvTrainResult out;
  Mat xb(n, bs), yb(m, bs), deltas(m, bs);

  for (Index epoch = 0; epoch < cfg.epochs; ++epoch) {
    shuffle_indices(perm, rng);
    const bool warm = epoch < cfg.warmup_epochs;
    double clean_sum = 0, adv_sum = 0, norm_sum = 0;
    Index batches = 0, delta_count = 0;
    for (Index start = 0; start + bs <= N; start += bs) {
      gather_batch(dataset, perm, start, xb);
      yb = A * xb;
      if (warm) {
        double clean = 0;
        const MlpGradients grads = clean_gradient(f, A, xb, yb, &clean);
        adam_step(f, f_state, grads, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2);
        clean_sum += clean;
      } else {
        for (Index k = 0; k < cfg.K; ++k) {
          const Mat xk = xb.middleCols(k * part, part);
          const Mat yk = yb.middleCols(k * part, part);
          const MlpGradients ascent = generator_objective_gradient(
              f, generator, A, xk, yk, cfg.lambda1, cfg.lambda2, cfg.epsilon);
          adam_step(generator, g_state, ascent, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2,
                    -1);
          deltas.middleCols(k * part, part) = mlp_forward(generator, yk);
        }
        double clean = 0, adv = 0;
        const MlpGradients grads =
            recon_gradient_ex(f, A, xb, yb, deltas, cfg.lambda1, &clean, &adv);
        adam_step(f, f_state, grads, cfg.learning_rate, cfg.adam_beta1, cfg.adam_beta2);
        clean_sum += clean;
        adv_sum += adv;
        norm_sum += deltas.colwise().norm().sum();
        delta_count += bs;
      }
      ++batches;
    }
    const double clean_mean = clean_sum / double(batches);
    const double adv_mean = warm ? 0.0 : adv_sum / double(batches);
    out.history.clean_loss.push_back(clean_mean);
    out.history.adv_loss.push_back(adv_mean);
    out.history.gen_norm_mean.push_back(warm ? 0.0 : norm_sum / double(delta_count));
    const double watched = clean_mean + cfg.lambda1 * adv_mean;
    if (!std::isfinite(watched) || watched > kDivergenceCeiling) throw_diverged("adv_train", epoch);
  }
  out.f = std::move(f);
  out.generator = std::move(generator);
  return out;
}

BaselineTrainResult train_baseline(Mlp f, const Mat& A, const Mat& dataset,
                                   const BaselineConfig& variant,
                                   const AdvTrainConfig& optimizer) {
  optimizer.validate();
  variant.validate();
  check_training_inputs(f, A, dataset, "train_baseline");
  const Index N = dataset.cols();
  if (optimizer.batch_size > N)
    throw std::invalid_argument("train_baseline: batch_size exceeds dataset size");

  const Index n = A.cols(), m = A.rows(), bs = optimizer.batch_size;
  std::mt19937_64 rng(optimizer.seed);
  std::vector<Index> perm(static_cast<std::size_t>(N));
  for (Index i = 0; i < N; ++i) perm[static_cast<std::size_t>(i)] = i;

  AdamState f_state = adam_init(f);
  BaselineTrainResult out;
  Mat xb(n, bs), yb(m, bs);

  for (Index epoch = 0; epoch < optimizer.epochs; ++epoch) {
    shuffle_indices(perm, rng);
    double clean_sum = 0;
    Index batches = 0;
    for (Index start = 0; start + bs <= N; start += bs) {
      gather_batch(dataset, perm, start, xb);
      yb = A * xb;
      double clean = 0;
      MlpGradients grads = clean_gradient(f, A, xb, yb, &clean);
      if (variant.variant == BaselineVariant::WeightDecay && variant.mu > 0)
        add_weight_decay_gradient(f, variant.mu, grads);
      else if (variant.variant == BaselineVariant::Parseval && variant.beta > 0)
        add_parseval_gradient(f, variant.beta, grads);
      adam_step(f, f_state, grads, optimizer.learning_rate, optimizer.adam_beta1,
                optimizer.adam_beta2);
      clean_sum += clean;
      ++batches;
    }
    const double clean_mean = clean_sum / double(batches);
    out.history.clean_loss.push_back(clean_mean);
    out.history.adv_loss.push_back(0.0);
    out.history.gen_norm_mean.push_back(0.0);
    if (!std::isfinite(clean_mean) || clean_mean > kDivergenceCeiling)
      throw_diverged("train_baseline", epoch);
  }
  out.f = std::move(f);
  return out;
}

namespace {

void put_u64_le(std::string& buf, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xff));
}

void put_f64_le(std::string& buf, double v) {
  put_u64_le(buf, std::bit_cast<std::uint64_t>(v));
}

struct ByteReader {
  const std::vector<std::uint8_t>& bytes;
  std::size_t pos = 0;

  void need(std::size_t count) const {
    if (pos + count > bytes.size()) throw std::runtime_error("checkpoint truncated");
  }
  std::uint8_t u8() {
    need(1);
    return bytes[pos++];
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(bytes[pos + std::size_t(i)]) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
};

} // namespace

void checkpoint_save(const Mlp& net, const std::string& path) {
  check_net(net, "checkpoint_save");
  std::string buf;
  buf.append(kMagic, sizeof(kMagic)); // 13 bytes including the NUL
  buf.push_back(char(kVersion));
  const auto dims = net.layer_dims();
  put_u64_le(buf, dims.size());
  for (Index d : dims) put_u64_le(buf, std::uint64_t(d));
  const std::size_t layers = net.weights.size();
  for (std::size_t l = 0; l < layers; ++l) {
    if (l + 1 < layers)
      buf.push_back(char(kTagRelu));
    else
      buf.push_back(char(net.output == OutputActivation::Tanh ? kTagTanh : kTagLinear));
  }
  for (std::size_t l = 0; l < layers; ++l) {
    const Mat& w = net.weights[l];
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) put_f64_le(buf, w(i, j));
    for (Index i = 0; i < net.biases[l].size(); ++i) put_f64_le(buf, net.biases[l](i));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out.good()) throw std::runtime_error("cannot open file: " + path);
  out.write(buf.data(), std::streamsize(buf.size()));
  if (!out.good()) throw std::runtime_error("checkpoint write failed: " + path);
}

Mlp checkpoint_load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  ByteReader r{bytes};

  r.need(sizeof(kMagic));
  if (std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0)
    throw std::runtime_error("checkpoint magic mismatch");
  r.pos = sizeof(kMagic);
  if (r.u8() != kVersion) throw std::runtime_error("checkpoint version unsupported");

  const std::uint64_t dim_count = r.u64();
  if (dim_count < 2 || dim_count > 1024) throw std::runtime_error("checkpoint dimension invalid");
  std::vector<Index> dims(dim_count);
  for (auto& d : dims) {
    const std::uint64_t v = r.u64();
    if (v == 0 || v > (1u << 24)) throw std::runtime_error("checkpoint dimension invalid");
    d = Index(v);
  }
  const std::size_t layers = dims.size() - 1;
  Mlp net;
  for (std::size_t l = 0; l < layers; ++l) {
    const std::uint8_t tag = r.u8();
    if (l + 1 < layers) {
      if (tag != kTagRelu) throw std::runtime_error("checkpoint activation tag invalid");
    } else if (tag == kTagTanh) {
      net.output = OutputActivation::Tanh;
    } else if (tag == kTagLinear) {
      net.output = OutputActivation::Linear;
    } else {
      throw std::runtime_error("checkpoint activation tag invalid");
    }
  }
  for (std::size_t l = 0; l < layers; ++l) {
    Mat w(dims[l + 1], dims[l]);
    for (Index i = 0; i < w.rows(); ++i)
      for (Index j = 0; j < w.cols(); ++j) w(i, j) = r.f64();
    Vec b(dims[l + 1]);
    for (Index i = 0; i < b.size(); ++i) b(i) = r.f64();
    net.weights.push_back(std::move(w));
    net.biases.push_back(std::move(b));
  }
  if (r.pos != bytes.size()) throw std::runtime_error("checkpoint trailing bytes");
  return net;
}

} // namespace advrecon
