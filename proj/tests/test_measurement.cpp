#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <advrecon/measurement.hpp>

using namespace advrecon;

namespace {

double rel_fro(const Mat& a, const Mat& b) { return (a - b).norm() / b.norm(); }

} // namespace

TEST_CASE("gaussian operator matches its sampling law") {
  auto op = gen_gaussian_operator(100, 784, 7);
  REQUIRE(op.entries.rows() == 100);
  REQUIRE(op.entries.cols() == 784);
  const double mean = op.entries.mean();
  const double var = (op.entries.array() - mean).square().mean();
  CHECK(std::abs(mean) < 3e-3); // sd of the sample mean is ~1/sqrt(m*n*m)
  CHECK(var == doctest::Approx(0.01).epsilon(0.10));

  auto again = gen_gaussian_operator(100, 784, 7);
  CHECK(op.entries == again.entries);
  auto other = gen_gaussian_operator(100, 784, 8);
  CHECK(op.entries != other.entries);
}

TEST_CASE("gaussian operator rejects bad dims") {
  CHECK_THROWS_AS(gen_gaussian_operator(0, 5, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_gaussian_operator(5, 0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_gaussian_operator(6, 5, 1), std::invalid_argument);
}

TEST_CASE("dct basis is orthonormal") {
  const Mat D = dct_matrix<double>(32);
  CHECK((D.transpose() * D - Mat::Identity(32, 32)).norm() < 1e-10);
  // full square basis has condition number 1
  auto op = make_operator(D, OperatorKind::DctRows);
  auto rep = conditioning_report(op);
  CHECK(rep.kappa == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("dct operator selects distinct rows and columns") {
  auto op = gen_dct_operator(10, 20, 32, 3);
  CHECK(op.entries.rows() == 10);
  CHECK(op.entries.cols() == 20);
  auto again = gen_dct_operator(10, 20, 32, 3);
  CHECK(op.entries == again.entries);
  CHECK_THROWS_AS(gen_dct_operator(10, 20, 20, 3), std::invalid_argument); // p <= n
  CHECK_THROWS_AS(gen_dct_operator(10, 20, 19, 3), std::invalid_argument);
}

TEST_CASE("default dct ambient size is next power of two") {
  CHECK(default_dct_p(784) == 1024);
  CHECK(default_dct_p(196) == 256);
  CHECK(default_dct_p(1024) == 2048); // strictly greater
  CHECK(default_dct_p(1) == 2);
}

TEST_CASE("svd convention: increasing spectrum with null-space padding") {
  auto op = gen_gaussian_operator(5, 8, 11);
  const auto f = compute_svd(op);
  REQUIRE(f.S.size() == 8);
  REQUIRE(f.U.rows() == 5);
  REQUIRE(f.V.rows() == 8);
  for (Index i = 0; i + 1 < f.S.size(); ++i) CHECK(f.S(i) <= f.S(i + 1));
  for (Index i = 0; i < 3; ++i) CHECK(f.S(i) == 0.0); // 8 - 5 structural zeros
  CHECK((f.U.transpose() * f.U - Mat::Identity(5, 5)).norm() < 1e-10);
  CHECK((f.V.transpose() * f.V - Mat::Identity(8, 8)).norm() < 1e-10);
  CHECK(rel_fro(f.reconstruct(), op.entries) < 1e-10);
  // padding columns of V really are the null space
  CHECK((op.entries * f.V.leftCols(3)).norm() < 1e-10);
}

TEST_CASE("svd of simple diagonals") {
  Mat A(2, 2);
  A << 1, 0, 0, 0.1;
  auto f = svd_of<double>(A);
  CHECK(f.S(0) == doctest::Approx(0.1));
  CHECK(f.S(1) == doctest::Approx(1.0));

  auto id = make_operator(Mat::Identity(4, 4));
  auto fi = compute_svd(id);
  CHECK((fi.S.array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("ensure_svd caches") {
  auto op = gen_gaussian_operator(4, 6, 2);
  CHECK(!op.svd.has_value());
  const auto& f = ensure_svd(op);
  CHECK(op.svd.has_value());
  CHECK(&f == &*op.svd);
}

TEST_CASE("modify_spectrum replaces the requested values only") {
  auto op = gen_gaussian_operator(10, 20, 7);
  auto before = compute_svd(op);
  auto mod = modify_spectrum(op, {{0, 1e-4}, {1, 1e-3}});
  CHECK(mod.kind == OperatorKind::ModifiedSpectrum);
  auto after = compute_svd(mod);
  CHECK(after.S(20 - 10 + 0) == doctest::Approx(1e-4));
  CHECK(after.S(20 - 10 + 1) == doctest::Approx(1e-3));
  for (Index i = 2; i < 10; ++i)
    CHECK(after.S(10 + i) == doctest::Approx(before.S(10 + i)).epsilon(1e-10));
  CHECK(rel_fro(mod.svd->reconstruct(), mod.entries) < 1e-10);
}

TEST_CASE("modify_spectrum with empty list is a no-op") {
  auto op = gen_gaussian_operator(6, 9, 5);
  auto mod = modify_spectrum(op, {});
  CHECK(rel_fro(mod.entries, op.entries) < 1e-10);
}

TEST_CASE("modify_spectrum re-sorts order-breaking replacements") {
  auto op = gen_gaussian_operator(4, 4, 9);
  // push the smallest singular value above all others
  auto mod = modify_spectrum(op, {{0, 100.0}});
  auto f = compute_svd(mod);
  for (Index i = 0; i + 1 < f.S.size(); ++i) CHECK(f.S(i) <= f.S(i + 1));
  CHECK(f.S(3) == doctest::Approx(100.0));
  CHECK(rel_fro(f.reconstruct(), mod.entries) < 1e-10);
}

TEST_CASE("modify_spectrum on square operator can force orthogonality") {
  auto op = gen_gaussian_operator(5, 5, 13);
  std::vector<std::pair<Index, double>> all;
  for (Index i = 0; i < 5; ++i) all.push_back({i, 1.0});
  auto mod = modify_spectrum(op, all);
  CHECK((mod.entries.transpose() * mod.entries - Mat::Identity(5, 5)).norm() < 1e-10);
}

TEST_CASE("modify_spectrum input validation") {
  auto op = gen_gaussian_operator(4, 6, 1);
  CHECK_THROWS_AS(modify_spectrum(op, {{0, 1.0}, {0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(modify_spectrum(op, {{4, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(modify_spectrum(op, {{-1, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(modify_spectrum(op, {{0, 0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(modify_spectrum(op, {{0, -2.0}}), std::invalid_argument);
}

TEST_CASE("modify_spectrum preserves singular vectors") {
  auto op = gen_gaussian_operator(6, 10, 21);
  auto before = compute_svd(op);
  auto mod = modify_spectrum(op, {{0, 1e-3}});
  auto after = compute_svd(mod);
  // distinct values: vectors match up to sign
  for (Index k = 1; k < 6; ++k) {
    const double dot = std::abs(before.U.col(k).dot(after.U.col(k)));
    CHECK(dot == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("apply and adjoint_apply are exact products") {
  auto op = gen_gaussian_operator(3, 5, 4);
  Vec x = Vec::LinSpaced(5, -1.0, 1.0);
  CHECK((apply(op, x) - op.entries * x).norm() == 0.0);
  Vec y = apply(op, x);
  Vec back = adjoint_apply(op, y);
  CHECK((back - op.entries.transpose() * op.entries * x).norm() < 1e-14);

  auto id = make_operator(Mat::Identity(4, 4));
  Vec z = Vec::Ones(4);
  CHECK((apply(id, z) - z).norm() == 0.0);
  CHECK((adjoint_apply(id, z) - z).norm() == 0.0);
  CHECK(apply(op, Vec::Zero(5)).norm() == 0.0);

  CHECK_THROWS_AS(apply(op, Vec::Zero(4)), std::invalid_argument);
  CHECK_THROWS_AS(adjoint_apply(op, Vec::Zero(5)), std::invalid_argument);
}

TEST_CASE("conditioning report basics") {
  Mat A(2, 2);
  A << 1, 0, 0, 0.1;
  auto op = make_operator(A);
  auto rep = conditioning_report(op);
  CHECK(rep.kappa == doctest::Approx(10.0));
  CHECK(rep.sigma_min == doctest::Approx(0.1));
  CHECK(rep.sigma_max == doctest::Approx(1.0));
  std::int64_t total = 0;
  for (const auto& b : rep.histogram) total += b.count;
  CHECK(total == 2);

  auto zero = make_operator(Mat::Zero(3, 3));
  CHECK_THROWS_AS(conditioning_report(zero), std::invalid_argument);
}

TEST_CASE("histogram counts cover the nonzero spectrum") {
  auto op = gen_gaussian_operator(40, 80, 17);
  auto rep = conditioning_report(op);
  REQUIRE(rep.histogram.size() == 50);
  std::int64_t total = 0;
  for (const auto& b : rep.histogram) total += b.count;
  CHECK(total == 40);
  CHECK(rep.kappa >= 1.0);
}

TEST_CASE("gaussian 100x784 conditioning is near 2") {
  double acc = 0;
  for (int s = 0; s < 3; ++s) {
    auto op = gen_gaussian_operator(100, 784, 1000 + s);
    acc += conditioning_report(op).kappa;
  }
  CHECK(acc / 3 > 1.5);
  CHECK(acc / 3 < 2.6);
}

TEST_CASE("generated operators survive svd round trip") {
  for (std::int64_t s = 0; s < 3; ++s) {
    auto g = gen_gaussian_operator(8, 15, s);
    CHECK(rel_fro(compute_svd(g).reconstruct(), g.entries) < 1e-10);
    auto d = gen_dct_operator(8, 15, 16, s);
    CHECK(rel_fro(compute_svd(d).reconstruct(), d.entries) < 1e-10);
  }
}

TEST_CASE("svd templates instantiate for float") {
  MatX<float> A = MatX<float>::Random(3, 4);
  auto f = svd_of<float>(A);
  CHECK((f.reconstruct() - A).norm() / A.norm() < 1e-5f);
}
