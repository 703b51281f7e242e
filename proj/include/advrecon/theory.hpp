#pragma once

#include <stdexcept>

#include "advrecon/measurement.hpp"
#include "advrecon/types.hpp"

namespace advrecon {

// Robust linear reconstructor B = M diag(Q) P^T. Q runs over the nonzero
// singular values in increasing order: the first m_star entries share the
// filtered gain q_m, the rest are exact inverses 1/S_i.
template <class Scalar>
struct RobustLinearSolution {
  MatX<Scalar> B;        // n x m
  MatX<Scalar> M;        // n x n, equals V
  MatX<Scalar> P;        // m x m, equals U
  VecX<Scalar> Q;        // length rank
  Index m_star = 0;      // multiplicity, 1-based count
  Scalar q_m = 0;        // shared filtered gain
  Scalar h = 0;          // lambda * epsilon^2 / (1 + lambda)
  Scalar lambda = 0;
  Scalar epsilon = 0;
  Scalar objective_value = 0;
  // set when no multiplicity satisfies the consistency condition and the
  // plain objective minimizer was used instead (not expected mathematically)
  bool consistency_fallback = false;
};

using RobustLinearSolutionD = RobustLinearSolution<double>;

template <class Scalar>
struct ReducedObjectiveValue {
  Scalar fidelity_term = 0;    // (1+lambda) * ||BA - I||_F^2
  Scalar adversarial_term = 0; // lambda * epsilon^2 * sigma_max(B)^2
  Scalar total = 0;
};

// q = (sum_{i<=m} S_i) / (sum_{i<=m} S_i^2 + h) over the m smallest nonzero
// singular values; S ascending, m_candidate 1-based.
template <class Scalar>
Scalar filtered_gain(const VecX<Scalar>& S, Scalar lambda, Scalar epsilon, Index m_candidate) {
  if (!(lambda > 0)) throw std::invalid_argument("filtered_gain: lambda must be positive");
  if (!(epsilon >= 0)) throw std::invalid_argument("filtered_gain: epsilon must be non-negative");
  if (m_candidate < 1 || m_candidate > S.size())
    throw std::invalid_argument("filtered_gain: m_candidate out of range");
  const Scalar h = lambda * epsilon * epsilon / (Scalar(1) + lambda);
  Scalar num = 0, den = h;
  for (Index i = 0; i < m_candidate; ++i) {
    num += S(i);
    den += S(i) * S(i);
  }
  return num / den;
}

// Reduced objective of a diagonal-gain reconstructor on spectrum S (ascending
// nonzero values), with ambient signal dimension n: (1+lambda) * [sum (q_i S_i
// - 1)^2 + (n - rank)] + lambda * epsilon^2 * (max q)^2.
template <class Scalar>
Scalar gain_objective(const VecX<Scalar>& q, const VecX<Scalar>& S, Scalar lambda, Scalar epsilon,
                      Index n) {
  Scalar fit = Scalar(n - S.size());
  for (Index i = 0; i < S.size(); ++i) {
    const Scalar d = q(i) * S(i) - Scalar(1);
    fit += d * d;
  }
  const Scalar qmax = q.size() ? q.maxCoeff() : Scalar(0);
  return (Scalar(1) + lambda) * fit + lambda * epsilon * epsilon * qmax * qmax;
}

struct MultiplicityChoice {
  Index m_star = 0;
  bool consistent = true;
};

// Smallest consistent multiplicity minimizing the reduced objective. The
// consistency condition is filtered_gain(m) >= 1/S_{m+1}, vacuous at m = rank.
template <class Scalar>
MultiplicityChoice select_multiplicity(const VecX<Scalar>& S, Scalar lambda, Scalar epsilon,
                                       Index n_ambient = -1) {
  const Index r = S.size();
  if (r < 1) throw std::invalid_argument("select_multiplicity: empty spectrum");
  const Index n = n_ambient < 0 ? r : n_ambient;
  auto induced = [&](Index m) {
    const Scalar q = filtered_gain(S, lambda, epsilon, m);
    VecX<Scalar> gains(r);
    for (Index i = 0; i < r; ++i) gains(i) = (i < m) ? q : Scalar(1) / S(i);
    return gains;
  };
  Index best_consistent = -1, best_any = -1;
  Scalar obj_consistent = 0, obj_any = 0;
  for (Index m = 1; m <= r; ++m) {
    const Scalar q = filtered_gain(S, lambda, epsilon, m);
    const bool ok = (m == r) || (q >= Scalar(1) / S(m) - Scalar(1e-14));
    const Scalar obj = gain_objective(VecX<Scalar>(induced(m)), S, lambda, epsilon, n);
    if (best_any < 0 || obj < obj_any) {
      best_any = m;
      obj_any = obj;
    }
    if (ok && (best_consistent < 0 || obj < obj_consistent)) {
      best_consistent = m;
      obj_consistent = obj;
    }
  }
  if (best_consistent >= 0) return {best_consistent, true};
  return {best_any, false};
}

RobustLinearSolutionD theorem1_reconstructor(const MeasurementOperatorD& op, double lambda,
                                             double epsilon);

ReducedObjectiveValue<double> reduced_objective(const Mat& B, const Mat& A, double lambda,
                                                double epsilon);

// epsilon times the top right-singular vector of B, sign-canonicalized so the
// largest-magnitude component is positive.
Vec worst_case_delta_linear(const Mat& B, double epsilon);

// Independent check of the closed form: minimizes the reduced objective over
// diagonal gains with a 1-D convex search over the gain cap (for any cap c the
// optimal gains are min(1/S_i, c)), then a subgradient polish in q-space from
// several starts. Never consults the filtered-gain formula.
Mat numerical_oracle(const MeasurementOperatorD& op, double lambda, double epsilon,
                     double tolerance = 1e-12);

// Moore-Penrose pseudo-inverse via the operator's SVD.
Mat pseudo_inverse(const MeasurementOperatorD& op);

} // namespace advrecon
