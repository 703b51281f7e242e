#include "advrecon/data_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <stdexcept>

namespace advrecon {

namespace {

constexpr std::uint32_t kImagesMagic = 2051; // 0x00000803
constexpr std::uint32_t kLabelsMagic = 2049; // 0x00000801
constexpr std::uint64_t kMaxPayload = std::uint64_t(1) << 33;

std::uint32_t read_u32_be(std::istream& in, const char* context) {
  std::uint8_t b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4))
    throw std::runtime_error(std::string("IDX truncated header: ") + context);
  return (std::uint32_t(b[0]) << 24) | (std::uint32_t(b[1]) << 16) | (std::uint32_t(b[2]) << 8) |
         std::uint32_t(b[3]);
}

void write_u32_be(std::ostream& out, std::uint32_t v) {
  const std::uint8_t b[4] = {std::uint8_t(v >> 24), std::uint8_t(v >> 16), std::uint8_t(v >> 8),
                             std::uint8_t(v)};
  out.write(reinterpret_cast<const char*>(b), 4);
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  return in;
}

void read_payload(std::istream& in, std::vector<std::uint8_t>& buf, const std::string& path) {
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
    throw std::runtime_error("IDX truncated payload: " + path);
  char extra;
  if (in.read(&extra, 1)) throw std::runtime_error("IDX trailing bytes: " + path);
}

} // namespace

IdxImages idx_read_images(const std::string& path) {
  std::ifstream in = open_input(path);
  const std::uint32_t magic = read_u32_be(in, "magic");
  if (magic != kImagesMagic)
    throw std::runtime_error("IDX magic mismatch (expected 2051 image file): " + path);
  IdxImages img;
  img.count = read_u32_be(in, "count");
  img.rows = read_u32_be(in, "rows");
  img.cols = read_u32_be(in, "cols");
  const std::uint64_t total = std::uint64_t(img.count) * img.rows * img.cols;
  if (img.rows == 0 || img.cols == 0 || total > kMaxPayload)
    throw std::runtime_error("IDX dimension overflow: " + path);
  img.pixels.resize(static_cast<std::size_t>(total));
  read_payload(in, img.pixels, path);
  return img;
}

void idx_write_images(const std::string& path, const IdxImages& images) {
  if (std::uint64_t(images.count) * images.rows * images.cols != images.pixels.size())
    throw std::invalid_argument("idx_write_images: payload size does not match dims");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  write_u32_be(out, kImagesMagic);
  write_u32_be(out, images.count);
  write_u32_be(out, images.rows);
  write_u32_be(out, images.cols);
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::vector<std::uint8_t> idx_read_labels(const std::string& path) {
  std::ifstream in = open_input(path);
  const std::uint32_t magic = read_u32_be(in, "magic");
  if (magic != kLabelsMagic)
    throw std::runtime_error("IDX magic mismatch (expected 2049 label file): " + path);
  const std::uint32_t count = read_u32_be(in, "count");
  if (std::uint64_t(count) > kMaxPayload) throw std::runtime_error("IDX dimension overflow: " + path);
  std::vector<std::uint8_t> labels(count);
  read_payload(in, labels, path);
  return labels;
}

void idx_write_labels(const std::string& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open file for writing: " + path);
  write_u32_be(out, kLabelsMagic);
  write_u32_be(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()),
            static_cast<std::streamsize>(labels.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

Dataset load_mnist_idx(const std::string& images_path,
                       const std::optional<std::string>& labels_path) {
  const IdxImages img = idx_read_images(images_path);
  if (labels_path) {
    const auto labels = idx_read_labels(*labels_path);
    if (labels.size() != img.count)
      throw std::runtime_error("IDX label count does not match image count: " + *labels_path);
  }
  Dataset data;
  data.n = Index(img.rows) * Index(img.cols);
  data.source = DataSource::Mnist;
  data.scale = 2.0 / 255.0;
  data.offset = -1.0;
  data.samples.resize(data.n, Index(img.count));
  for (Index j = 0; j < Index(img.count); ++j)
    for (Index i = 0; i < data.n; ++i)
      data.samples(i, j) =
          double(img.pixels[static_cast<std::size_t>(j * data.n + i)]) * data.scale + data.offset;
  return data;
}

Dataset downsample(const Dataset& data, Index factor) {
  if (factor <= 0) throw std::invalid_argument("downsample: factor must be positive");
  const Index side = static_cast<Index>(std::llround(std::sqrt(double(data.n))));
  if (side * side != data.n)
    throw std::invalid_argument("downsample: dataset entries are not square images");
  if (side % factor != 0)
    throw std::invalid_argument("downsample: image side not divisible by factor");
  const Index out_side = side / factor;
  Dataset out;
  out.n = out_side * out_side;
  out.source = DataSource::MnistDownsampled;
  out.scale = data.scale;
  out.offset = data.offset;
  out.sigma_noise = data.sigma_noise;
  out.samples.resize(out.n, data.count());
  const double inv = 1.0 / double(factor * factor);
  for (Index j = 0; j < data.count(); ++j)
    for (Index r = 0; r < out_side; ++r)
      for (Index c = 0; c < out_side; ++c) {
        double acc = 0;
        for (Index dr = 0; dr < factor; ++dr)
          for (Index dc = 0; dc < factor; ++dc)
            acc += data.samples((r * factor + dr) * side + (c * factor + dc), j);
        out.samples(r * out_side + c, j) = acc * inv;
      }
  return out;
}

std::pair<Dataset, Dataset> train_test_split(const Dataset& data, Index train_count,
                                             std::int64_t seed) {
  const Index total = data.count();
  if (train_count <= 0 || train_count >= total)
    throw std::invalid_argument("train_test_split: train_count must be in (0, total)");
  std::vector<Index> perm(static_cast<std::size_t>(total));
  for (Index i = 0; i < total; ++i) perm[static_cast<std::size_t>(i)] = i;
  // Fisher-Yates with explicit modulo so the split depends only on the seed.
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  for (Index i = total - 1; i > 0; --i) {
    const Index j = static_cast<Index>(rng() % static_cast<std::uint64_t>(i + 1));
    std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
  }
  auto take = [&](Index begin, Index count) {
    Dataset part;
    part.n = data.n;
    part.source = data.source;
    part.scale = data.scale;
    part.offset = data.offset;
    part.sigma_noise = data.sigma_noise;
    part.samples.resize(data.n, count);
    for (Index k = 0; k < count; ++k)
      part.samples.col(k) = data.samples.col(perm[static_cast<std::size_t>(begin + k)]);
    return part;
  };
  return {take(0, train_count), take(train_count, total - train_count)};
}

Dataset sample_gaussian_signals(Index count, Index dim, std::int64_t seed, double sigma_noise) {
  if (count <= 0 || dim <= 0)
    throw std::invalid_argument("sample_gaussian_signals: count and dim must be positive");
  if (sigma_noise < 0)
    throw std::invalid_argument("sample_gaussian_signals: sigma_noise must be non-negative");
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::normal_distribution<double> gauss(0.0, 1.0);
  Dataset data;
  data.n = dim;
  data.source = DataSource::SyntheticGaussian;
  data.sigma_noise = sigma_noise;
  data.samples.resize(dim, count);
  for (Index j = 0; j < count; ++j)
    for (Index i = 0; i < dim; ++i) data.samples(i, j) = gauss(rng);
  return data;
}

Dataset synth_glyph_images(Index count, Index side, std::int64_t seed) {
  if (count <= 0 || side < 8)
    throw std::invalid_argument("synth_glyph_images: need count > 0 and side >= 8");
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double pi = 3.14159265358979323846;
  const Index steps = 2 * side;

  Dataset data;
  data.n = side * side;
  data.source = DataSource::Mnist;
  data.scale = 2.0 / 255.0;
  data.offset = -1.0;
  data.samples.resize(data.n, count);

  std::vector<std::pair<double, double>> pts;
  pts.reserve(static_cast<std::size_t>(2 * steps));
  for (Index img = 0; img < count; ++img) {
    const int cls = static_cast<int>(rng() % 10);
    const double cy = side / 2.0 + (unif(rng) * 4.0 - 2.0);
    const double cx = side / 2.0 + (unif(rng) * 4.0 - 2.0);
    const double sc = side * (0.25 + 0.10 * unif(rng));
    const double rad = 1.2 + 0.8 * unif(rng);
    const double th = -0.3 + 0.6 * unif(rng);
    const double ct = std::cos(th), st = std::sin(th);

    pts.clear();
    auto emit = [&](double y, double x) { pts.emplace_back(y, x); };
    for (Index k = 0; k < steps; ++k) {
      const double t = double(k) / double(steps - 1);
      switch (cls) {
        case 0: emit(0.8 * std::cos(2 * pi * t), 0.8 * std::sin(2 * pi * t)); break;
        case 1: emit(0.9 * (2 * t - 1), 0.0); break; // vertical bar
        case 2: emit(0.0, 0.9 * (2 * t - 1)); break; // horizontal bar
        case 3: // cross
          emit(0.8 * (2 * t - 1), 0.0);
          emit(0.0, 0.8 * (2 * t - 1));
          break;
        case 4: // L
          emit(0.8 * (2 * t - 1), -0.48);
          emit(0.8, -0.48 + 1.12 * t);
          break;
        case 5: // T
          emit(-0.64, 0.8 * (2 * t - 1));
          emit(-0.64 + 1.44 * t, 0.0);
          break;
        case 6: emit(0.8 * (2 * t - 1), 0.8 * (2 * t - 1)); break; // diagonal
        case 7: emit(0.8 * std::cos(pi * (t - 0.5)), 0.8 * std::sin(pi * (t - 0.5))); break;
        case 8: emit(-0.8 * std::cos(pi * (t - 0.5)), 0.8 * std::sin(pi * (t - 0.5))); break;
        default: // inward spiral
          emit(0.7 * std::cos(4 * pi * t) * (1 - t), 0.7 * std::sin(4 * pi * t) * (1 - t));
      }
    }

    auto col = data.samples.col(img);
    col.setConstant(-1.0);
    const double denom = 2.0 * rad * rad;
    const Index win = static_cast<Index>(std::ceil(4.0 * rad));
    for (const auto& [py0, px0] : pts) {
      const double py = (ct * py0 - st * px0) * sc + cy;
      const double px = (st * py0 + ct * px0) * sc + cx;
      const Index r0 = std::max<Index>(0, static_cast<Index>(std::floor(py)) - win);
      const Index r1 = std::min<Index>(side - 1, static_cast<Index>(std::ceil(py)) + win);
      const Index c0 = std::max<Index>(0, static_cast<Index>(std::floor(px)) - win);
      const Index c1 = std::min<Index>(side - 1, static_cast<Index>(std::ceil(px)) + win);
      for (Index r = r0; r <= r1; ++r)
        for (Index c = c0; c <= c1; ++c) {
          const double d2 = (r - py) * (r - py) + (c - px) * (c - px);
          const double v = 2.0 * std::exp(-d2 / denom) - 1.0;
          double& cell = col(r * side + c);
          if (v > cell) cell = v;
        }
    }
  }
  return data;
}

} // namespace advrecon
