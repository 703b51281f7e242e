#include "advrecon/measurement.hpp"

#include <algorithm>
#include <numeric>

namespace advrecon {

namespace {

// Distinct indices from [0, p), ascending, sampled without replacement.
std::vector<Index> sample_indices(Index count, Index p, std::mt19937_64& rng) {
  std::vector<Index> pool(static_cast<std::size_t>(p));
  std::iota(pool.begin(), pool.end(), Index(0));
  for (Index i = 0; i < count; ++i) {
    std::uniform_int_distribution<Index> pick(i, p - 1);
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
  }
  pool.resize(static_cast<std::size_t>(count));
  std::sort(pool.begin(), pool.end());
  return pool;
}

} // namespace

MeasurementOperatorD gen_gaussian_operator(Index m, Index n, std::int64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_gaussian_operator: dims must be positive");
  if (m > n) throw std::invalid_argument("gen_gaussian_operator: m must not exceed n");
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  std::normal_distribution<double> gauss(0.0, std::sqrt(1.0 / static_cast<double>(m)));
  MeasurementOperatorD op;
  op.m = m;
  op.n = n;
  op.kind = OperatorKind::Gaussian;
  op.seed = seed;
  op.entries.resize(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j) op.entries(i, j) = gauss(rng);
  return op;
}

Index default_dct_p(Index n) {
  Index p = 1;
  while (p <= n) p <<= 1;
  return p;
}

MeasurementOperatorD gen_dct_operator(Index m, Index n, Index p, std::int64_t seed) {
  if (m <= 0 || n <= 0) throw std::invalid_argument("gen_dct_operator: dims must be positive");
  if (m > n) throw std::invalid_argument("gen_dct_operator: m must not exceed n");
  if (p <= n) throw std::invalid_argument("gen_dct_operator: requires p > n");
  const Mat D = dct_matrix<double>(p);
  std::mt19937_64 rng(static_cast<std::uint64_t>(seed));
  const std::vector<Index> rows = sample_indices(m, p, rng);
  const std::vector<Index> cols = sample_indices(n, p, rng);
  MeasurementOperatorD op;
  op.m = m;
  op.n = n;
  op.kind = OperatorKind::DctRows;
  op.seed = seed;
  op.entries.resize(m, n);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < n; ++j)
      op.entries(i, j) = D(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  return op;
}

MeasurementOperatorD make_operator(Mat entries, OperatorKind kind, std::int64_t seed) {
  if (!entries.allFinite()) throw std::invalid_argument("make_operator: non-finite entries");
  if (entries.rows() > entries.cols())
    throw std::invalid_argument("make_operator: expected m <= n");
  MeasurementOperatorD op;
  op.m = entries.rows();
  op.n = entries.cols();
  op.entries = std::move(entries);
  op.kind = kind;
  op.seed = seed;
  return op;
}

const SvdFactors<double>& ensure_svd(MeasurementOperatorD& op) {
  if (!op.svd) op.svd = svd_of<double>(op.entries);
  return *op.svd;
}

SvdFactors<double> compute_svd(const MeasurementOperatorD& op) {
  if (op.svd) return *op.svd;
  return svd_of<double>(op.entries);
}

MeasurementOperatorD modify_spectrum(const MeasurementOperatorD& op,
                                     const std::vector<std::pair<Index, double>>& replacements) {
  const SvdFactors<double> f = compute_svd(op);
  const Index m = op.m, n = op.n;
  Vec tail = f.S.tail(m);
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (const auto& [idx, value] : replacements) {
    if (idx < 0 || idx >= m) throw std::invalid_argument("modify_spectrum: index out of range");
    if (seen[static_cast<std::size_t>(idx)])
      throw std::invalid_argument("modify_spectrum: duplicate index");
    if (!(value > 0)) throw std::invalid_argument("modify_spectrum: new value must be positive");
    seen[static_cast<std::size_t>(idx)] = true;
    tail(idx) = value;
  }

  // Stable re-sort so the increasing-order invariant survives order-breaking
  // replacement values; U and V columns track their singular values.
  std::vector<Index> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return tail(a) < tail(b); });

  SvdFactors<double> g;
  g.S = Vec::Zero(n);
  g.U.resize(m, m);
  g.V = f.V;
  for (Index k = 0; k < m; ++k) {
    const Index src = order[static_cast<std::size_t>(k)];
    g.S(n - m + k) = tail(src);
    g.U.col(k) = f.U.col(src);
    g.V.col(n - m + k) = f.V.col(n - m + src);
  }

  MeasurementOperatorD out;
  out.m = m;
  out.n = n;
  out.kind = OperatorKind::ModifiedSpectrum;
  out.seed = op.seed;
  out.entries = g.reconstruct();
  out.svd = std::move(g);
  return out;
}

ConditioningReport conditioning_report(MeasurementOperatorD& op) {
  const SvdFactors<double>& f = ensure_svd(op);
  const Index r = f.rank();
  if (r == 0) throw std::invalid_argument("conditioning_report: all-zero operator");
  const Vec sv = f.S.tail(r); // nonzero part, ascending
  ConditioningReport rep;
  rep.sigma_min = sv(0);
  rep.sigma_max = sv(r - 1);
  rep.kappa = rep.sigma_max / rep.sigma_min;
  if (rep.sigma_max == rep.sigma_min) {
    rep.histogram.push_back({rep.sigma_min, rep.sigma_max, r});
    return rep;
  }
  constexpr int kBins = 50;
  const double width = (rep.sigma_max - rep.sigma_min) / kBins;
  rep.histogram.resize(kBins);
  for (int b = 0; b < kBins; ++b) {
    rep.histogram[static_cast<std::size_t>(b)].lower = rep.sigma_min + b * width;
    rep.histogram[static_cast<std::size_t>(b)].upper = rep.sigma_min + (b + 1) * width;
  }
  for (Index i = 0; i < r; ++i) {
    int b = static_cast<int>((sv(i) - rep.sigma_min) / width);
    b = std::clamp(b, 0, kBins - 1);
    ++rep.histogram[static_cast<std::size_t>(b)].count;
  }
  return rep;
}

} // namespace advrecon
