#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "advrecon/types.hpp"

namespace advrecon {

enum class DataSource : std::uint8_t { Mnist = 0, MnistDownsampled = 1, SyntheticGaussian = 2 };

// Columns are samples. Image sources keep entries in [-1, 1] via the recorded
// affine map pixel -> pixel * scale + offset.
struct Dataset {
  Mat samples; // n x count
  Index n = 0;
  DataSource source = DataSource::Mnist;
  double scale = 1.0;
  double offset = 0.0;
  double sigma_noise = 0.0; // measurement noise level, 0 in every experiment

  Index count() const { return samples.cols(); }
};

// Raw IDX image payload, kept byte-exact for round-tripping.
struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels; // count * rows * cols, row-major per image
};

IdxImages idx_read_images(const std::string& path);
void idx_write_images(const std::string& path, const IdxImages& images);
std::vector<std::uint8_t> idx_read_labels(const std::string& path);
void idx_write_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

// Parse IDX images into a dataset on [-1, 1]. A label path, when given, is
// validated against the image count but labels are not otherwise used.
Dataset load_mnist_idx(const std::string& images_path,
                       const std::optional<std::string>& labels_path = std::nullopt);

// Block-mean pooling of square images by an integer factor.
Dataset downsample(const Dataset& data, Index factor);

// Seeded shuffle then disjoint split into (train, test).
std::pair<Dataset, Dataset> train_test_split(const Dataset& data, Index train_count,
                                             std::int64_t seed);

// I.i.d. standard normal signal vectors.
Dataset sample_gaussian_signals(Index count, Index dim, std::int64_t seed,
                                double sigma_noise = 0.0);

// Synthetic stroke-glyph images in [-1, 1], side x side, for desk-scale
// experiments when no real digit corpus is on disk. Ten jittered shape
// classes rendered with a Gaussian pen.
Dataset synth_glyph_images(Index count, Index side, std::int64_t seed);

} // namespace advrecon
