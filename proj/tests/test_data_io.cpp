#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <advrecon/data_io.hpp>

using namespace advrecon;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("advrecon_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

IdxImages tiny_images() {
  IdxImages img;
  img.count = 3;
  img.rows = 4;
  img.cols = 4;
  img.pixels.resize(48);
  for (std::size_t i = 0; i < img.pixels.size(); ++i)
    img.pixels[i] = static_cast<std::uint8_t>((i * 37) % 256);
  img.pixels[0] = 0;
  img.pixels[1] = 255;
  return img;
}

} // namespace

TEST_CASE("idx image round trip is byte identical") {
  TempDir tmp;
  const auto path = tmp.file("images.idx");
  idx_write_images(path, tiny_images());
  const auto bytes1 = slurp(path);
  // header starts 00 00 08 03
  REQUIRE(bytes1.size() >= 4);
  CHECK(bytes1[0] == 0);
  CHECK(bytes1[1] == 0);
  CHECK(bytes1[2] == 8);
  CHECK(bytes1[3] == 3);

  const IdxImages parsed = idx_read_images(path);
  CHECK(parsed.count == 3);
  CHECK(parsed.rows == 4);
  CHECK(parsed.cols == 4);
  const auto path2 = tmp.file("images2.idx");
  idx_write_images(path2, parsed);
  CHECK(slurp(path2) == bytes1);
}

TEST_CASE("idx loader rejects corruption distinctly") {
  TempDir tmp;
  const auto path = tmp.file("images.idx");
  idx_write_images(path, tiny_images());

  SUBCASE("corrupt magic") {
    auto bytes = slurp(path);
    bytes[3] = 9;
    std::ofstream(path, std::ios::binary)
        .write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    CHECK_THROWS_WITH_AS(idx_read_images(path),
                         doctest::Contains("magic mismatch"), std::runtime_error);
  }
  SUBCASE("truncated payload") {
    auto bytes = slurp(path);
    bytes.resize(bytes.size() - 5);
    std::ofstream(path, std::ios::binary | std::ios::trunc)
        .write(reinterpret_cast<const char*>(bytes.data()),
               static_cast<std::streamsize>(bytes.size()));
    CHECK_THROWS_WITH_AS(idx_read_images(path),
                         doctest::Contains("truncated"), std::runtime_error);
  }
  SUBCASE("dimension overflow") {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    const std::uint8_t hdr[] = {0, 0, 8, 3, 0xFF, 0xFF, 0xFF, 0xFF,
                                0xFF, 0xFF, 0xFF, 0xFF, 0, 0, 0, 28};
    out.write(reinterpret_cast<const char*>(hdr), sizeof(hdr));
    out.close();
    CHECK_THROWS_WITH_AS(idx_read_images(path),
                         doctest::Contains("dimension overflow"), std::runtime_error);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_WITH_AS(idx_read_images(tmp.file("nope.idx")),
                         doctest::Contains("cannot open"), std::runtime_error);
  }
}

TEST_CASE("pixel endpoints map to the [-1,1] range ends") {
  TempDir tmp;
  const auto path = tmp.file("images.idx");
  idx_write_images(path, tiny_images());
  const Dataset data = load_mnist_idx(path);
  CHECK(data.n == 16);
  CHECK(data.count() == 3);
  CHECK(data.samples(0, 0) == doctest::Approx(-1.0));
  CHECK(data.samples(1, 0) == doctest::Approx(1.0));
  CHECK(data.samples.minCoeff() >= -1.0);
  CHECK(data.samples.maxCoeff() <= 1.0);
}

TEST_CASE("label file validation") {
  TempDir tmp;
  const auto ipath = tmp.file("images.idx");
  const auto lpath = tmp.file("labels.idx");
  idx_write_images(ipath, tiny_images());
  idx_write_labels(lpath, {1, 2, 3});
  CHECK_NOTHROW(load_mnist_idx(ipath, lpath));

  idx_write_labels(lpath, {1, 2});
  CHECK_THROWS_WITH_AS(load_mnist_idx(ipath, lpath),
                       doctest::Contains("label count"), std::runtime_error);

  // label round trip
  idx_write_labels(lpath, {7, 0, 9, 255});
  CHECK(idx_read_labels(lpath) == std::vector<std::uint8_t>{7, 0, 9, 255});
}

TEST_CASE("downsample block means") {
  Dataset data;
  data.n = 16;
  data.source = DataSource::Mnist;
  data.samples.resize(16, 2);
  data.samples.col(0).setConstant(0.25);
  for (Index i = 0; i < 16; ++i) data.samples(i, 1) = -1.0 + i * (2.0 / 15.0);

  const Dataset half = downsample(data, 2);
  CHECK(half.n == 4);
  CHECK(half.source == DataSource::MnistDownsampled);
  CHECK((half.samples.col(0).array() - 0.25).abs().maxCoeff() < 1e-15);
  // top-left block of image 1: pixels 0,1,4,5
  const double expect =
      (data.samples(0, 1) + data.samples(1, 1) + data.samples(4, 1) + data.samples(5, 1)) / 4.0;
  CHECK(half.samples(0, 1) == doctest::Approx(expect));
  // energy never increases
  CHECK(half.samples.col(1).squaredNorm() <= data.samples.col(1).squaredNorm());

  const Dataset same = downsample(data, 1);
  CHECK((same.samples - data.samples).norm() == 0.0);

  CHECK_THROWS_AS(downsample(data, 3), std::invalid_argument);
  Dataset notsquare;
  notsquare.n = 15;
  notsquare.samples.resize(15, 1);
  CHECK_THROWS_AS(downsample(notsquare, 1), std::invalid_argument);
}

TEST_CASE("train test split is an exact disjoint shuffle") {
  Dataset data = sample_gaussian_signals(50, 3, 99);
  auto [train, test] = train_test_split(data, 30, 5);
  CHECK(train.count() == 30);
  CHECK(test.count() == 20);

  auto again = train_test_split(data, 30, 5);
  CHECK((again.first.samples - train.samples).norm() == 0.0);
  auto other = train_test_split(data, 30, 6);
  CHECK((other.first.samples - train.samples).norm() != 0.0);

  // union as multiset of columns: compare sorted first-coordinate signatures
  std::vector<double> sig;
  for (Index j = 0; j < 30; ++j) sig.push_back(train.samples(0, j));
  for (Index j = 0; j < 20; ++j) sig.push_back(test.samples(0, j));
  std::vector<double> orig;
  for (Index j = 0; j < 50; ++j) orig.push_back(data.samples(0, j));
  std::sort(sig.begin(), sig.end());
  std::sort(orig.begin(), orig.end());
  CHECK(sig == orig);

  CHECK_THROWS_AS(train_test_split(data, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(train_test_split(data, 50, 1), std::invalid_argument);
}

TEST_CASE("gaussian signals have the right statistics") {
  Dataset data = sample_gaussian_signals(50000, 4, 11);
  CHECK(data.source == DataSource::SyntheticGaussian);
  const Mat cov =
      data.samples * data.samples.transpose() / double(data.count());
  CHECK((cov - Mat::Identity(4, 4)).norm() / Mat::Identity(4, 4).norm() < 0.05);
  CHECK(data.sigma_noise == 0.0);

  Dataset again = sample_gaussian_signals(50000, 4, 11);
  CHECK((again.samples - data.samples).norm() == 0.0);

  CHECK_THROWS_AS(sample_gaussian_signals(0, 4, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian_signals(4, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(sample_gaussian_signals(4, 4, 1, -0.5), std::invalid_argument);
}

TEST_CASE("glyph images stay in range and are deterministic") {
  Dataset a = synth_glyph_images(40, 28, 3);
  CHECK(a.n == 784);
  CHECK(a.count() == 40);
  CHECK(a.samples.minCoeff() >= -1.0);
  CHECK(a.samples.maxCoeff() <= 1.0);
  // strokes actually mark the canvas
  CHECK(a.samples.maxCoeff() > 0.5);

  Dataset b = synth_glyph_images(40, 28, 3);
  CHECK((a.samples - b.samples).norm() == 0.0);
  Dataset c = synth_glyph_images(40, 28, 4);
  CHECK((a.samples - c.samples).norm() != 0.0);

  // downstream desk-scale shape
  Dataset half = downsample(a, 2);
  CHECK(half.n == 196);
  CHECK(half.samples.minCoeff() >= -1.0);
  CHECK(half.samples.maxCoeff() <= 1.0);
}
