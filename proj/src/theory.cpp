#include "advrecon/theory.hpp"

#include <cmath>
#include <random>

namespace advrecon {

namespace {

// B for a gain vector over the nonzero spectrum (ascending order).
Mat assemble(const SvdFactors<double>& f, const Vec& gains) {
  const Index m = f.rows(), n = f.cols();
  return f.V.rightCols(m) * gains.asDiagonal() * f.U.transpose();
}

Vec gains_for_cap(const Vec& S, double cap) {
  Vec q(S.size());
  for (Index i = 0; i < S.size(); ++i) q(i) = std::min(1.0 / S(i), cap);
  return q;
}

} // namespace

RobustLinearSolutionD theorem1_reconstructor(const MeasurementOperatorD& op, double lambda,
                                             double epsilon) {
  if (!(lambda > 0)) throw std::invalid_argument("theorem1_reconstructor: lambda must be positive");
  if (!(epsilon >= 0))
    throw std::invalid_argument("theorem1_reconstructor: epsilon must be non-negative");
  const SvdFactors<double> f = compute_svd(op);
  if (f.rank() != op.m) throw std::invalid_argument("theorem1_reconstructor: operator is rank-deficient");
  const Vec S = f.nonzero();
  const auto choice = select_multiplicity<double>(S, lambda, epsilon, op.n);
  const double q = filtered_gain<double>(S, lambda, epsilon, choice.m_star);

  RobustLinearSolutionD sol;
  sol.lambda = lambda;
  sol.epsilon = epsilon;
  sol.h = lambda * epsilon * epsilon / (1.0 + lambda);
  sol.m_star = choice.m_star;
  sol.q_m = q;
  sol.consistency_fallback = !choice.consistent;
  sol.Q.resize(S.size());
  for (Index i = 0; i < S.size(); ++i) sol.Q(i) = (i < choice.m_star) ? q : 1.0 / S(i);
  sol.M = f.V;
  sol.P = f.U;
  sol.B = assemble(f, sol.Q);
  sol.objective_value = gain_objective<double>(sol.Q, S, lambda, epsilon, op.n);
  return sol;
}

ReducedObjectiveValue<double> reduced_objective(const Mat& B, const Mat& A, double lambda,
                                                double epsilon) {
  if (B.rows() != A.cols() || B.cols() != A.rows())
    throw std::invalid_argument("reduced_objective: B must be n x m for A m x n");
  ReducedObjectiveValue<double> out;
  const Mat res = B * A - Mat::Identity(A.cols(), A.cols());
  out.fidelity_term = (1.0 + lambda) * res.squaredNorm();
  Eigen::JacobiSVD<Mat> svd(B);
  const double smax = svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
  out.adversarial_term = lambda * epsilon * epsilon * smax * smax;
  out.total = out.fidelity_term + out.adversarial_term;
  return out;
}

Vec worst_case_delta_linear(const Mat& B, double epsilon) {
  if (!(epsilon >= 0))
    throw std::invalid_argument("worst_case_delta_linear: epsilon must be non-negative");
  Eigen::JacobiSVD<Mat> svd(B, Eigen::ComputeThinV);
  Vec v = svd.matrixV().col(0);
  Index imax = 0;
  v.cwiseAbs().maxCoeff(&imax);
  if (v(imax) < 0) v = -v;
  return epsilon * v;
}

Mat pseudo_inverse(const MeasurementOperatorD& op) {
  const SvdFactors<double> f = compute_svd(op);
  const Index r = f.rank();
  if (r != op.m) throw std::invalid_argument("pseudo_inverse: operator is rank-deficient");
  return assemble(f, f.nonzero().cwiseInverse());
}

Mat numerical_oracle(const MeasurementOperatorD& op, double lambda, double epsilon,
                     double tolerance) {
  if (!(lambda > 0)) throw std::invalid_argument("numerical_oracle: lambda must be positive");
  if (!(epsilon >= 0)) throw std::invalid_argument("numerical_oracle: epsilon must be non-negative");
  const SvdFactors<double> f = compute_svd(op);
  if (f.rank() != op.m) throw std::invalid_argument("numerical_oracle: operator is rank-deficient");
  const Vec S = f.nonzero();
  const Index r = S.size(), n = op.n;
  auto obj = [&](const Vec& q) { return gain_objective<double>(q, S, lambda, epsilon, n); };

  // Stage 1: golden-section over the gain cap. phi(c) is convex, so this finds
  // the global minimum of the diagonal-gain objective.
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 1.0 / S(0);
  double c1 = hi - golden * (hi - lo), c2 = lo + golden * (hi - lo);
  double f1 = obj(gains_for_cap(S, c1)), f2 = obj(gains_for_cap(S, c2));
  for (int it = 0; it < 400 && (hi - lo) > 1e-15 * std::max(1.0, hi); ++it) {
    if (f1 < f2) {
      hi = c2;
      c2 = c1;
      f2 = f1;
      c1 = hi - golden * (hi - lo);
      f1 = obj(gains_for_cap(S, c1));
    } else {
      lo = c1;
      c1 = c2;
      f1 = f2;
      c2 = lo + golden * (hi - lo);
      f2 = obj(gains_for_cap(S, c2));
    }
  }
  Vec best = gains_for_cap(S, 0.5 * (lo + hi));
  double best_obj = obj(best);

  // Stage 2: subgradient polish in raw q-space from several starts; keeps the
  // oracle honest if the cap parameterization ever missed structure.
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Vec> starts = {best, S.cwiseInverse(), Vec::Zero(r)};
  for (int k = 0; k < 2; ++k) {
    Vec q(r);
    for (Index i = 0; i < r; ++i) q(i) = unif(rng) / S(i);
    starts.push_back(q);
  }
  for (const Vec& q0 : starts) {
    Vec q = q0;
    double prev = obj(q);
    Vec local_best = q;
    double local_best_obj = prev;
    for (int it = 1; it <= 5000; ++it) {
      Vec g(r);
      for (Index i = 0; i < r; ++i) g(i) = 2.0 * (1.0 + lambda) * (q(i) * S(i) - 1.0) * S(i);
      Index imax = 0;
      q.maxCoeff(&imax);
      g(imax) += 2.0 * lambda * epsilon * epsilon * q(imax);
      const double step = 0.5 / ((1.0 + lambda) * S(r - 1) * S(r - 1) * (1.0 + it * 0.01));
      q -= step * g;
      const double cur = obj(q);
      if (cur < local_best_obj) {
        local_best_obj = cur;
        local_best = q;
      }
      if (std::abs(prev - cur) < tolerance * std::max(1.0, std::abs(cur)) && it > 50) break;
      prev = cur;
    }
    if (local_best_obj < best_obj) {
      best_obj = local_best_obj;
      best = local_best;
    }
  }
  return assemble(f, best);
}

} // namespace advrecon
