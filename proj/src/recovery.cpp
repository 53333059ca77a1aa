#include "locsparse/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "locsparse/norms.hpp"

namespace locsparse {
namespace {

double uniform01(std::mt19937_64& rng) { return (rng() >> 11) * 0x1.0p-53; }

std::vector<Index> max_row_set(const Matrix& u, double tol) {
  const Vector sums = u.cwiseAbs().rowwise().sum();
  const double top = sums.maxCoeff();
  const double threshold = top - tol * std::max(1.0, top);
  std::vector<Index> rows;
  for (Index i = 0; i < u.rows(); ++i)
    if (sums[i] >= threshold) rows.push_back(i);
  return rows;
}

// Monotone scalar root finding on an increasing function.
template <typename F>
double bisect_increasing(F f, double lo, double hi, int iters = 80) {
  for (int k = 0; k < iters; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < 0.0)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

MembershipReport subgradient_membership(const Matrix& p, const Matrix& u,
                                        double tol) {
  require(p.rows() == u.rows() && p.cols() == u.cols(),
          "subgradient_membership: shape mismatch");
  require(tol >= 0.0, "subgradient_membership: tol must be >= 0");
  MembershipReport report;
  report.certificate.p = p;

  if (norm_l1_inf(u) == 0.0) {
    // At zero the subdifferential is the unit l^{inf,1} ball.
    Vector weights = p.cwiseAbs().rowwise().maxCoeff();
    report.weight_sum = weights.sum();
    for (Index i = 0; i < u.rows(); ++i)
      report.certificate.max_rows.push_back(i);
    report.certificate.weights = std::move(weights);
    report.worst_violation = std::max(0.0, report.weight_sum - 1.0);
    report.member = report.weight_sum <= 1.0 + tol;
    if (!report.member) report.detail = "||P||_{inf,1} exceeds 1 at U = 0";
    return report;
  }

  const std::vector<Index> max_rows = max_row_set(u, tol);
  std::vector<bool> is_max(static_cast<size_t>(u.rows()), false);
  for (Index i : max_rows) is_max[static_cast<size_t>(i)] = true;

  double worst = 0.0;
  for (Index i = 0; i < u.rows(); ++i) {
    if (is_max[static_cast<size_t>(i)]) continue;
    worst = std::max(worst, p.row(i).cwiseAbs().maxCoeff());
  }
  if (worst > tol) report.detail = "nonzero entry off the maximal rows";

  Vector weights(static_cast<Index>(max_rows.size()));
  double weight_sum = 0.0;
  for (size_t k = 0; k < max_rows.size(); ++k) {
    const Index i = max_rows[k];
    const double omega = p.row(i).cwiseAbs().maxCoeff();
    weights[static_cast<Index>(k)] = omega;
    weight_sum += omega;
    for (Index j = 0; j < u.cols(); ++j) {
      if (std::abs(u(i, j)) <= tol) continue;  // |p| <= omega holds by choice
      const double sign = u(i, j) > 0.0 ? 1.0 : -1.0;
      const double violation = std::abs(p(i, j) - omega * sign);
      if (violation > worst) {
        worst = violation;
        if (violation > tol)
          report.detail = "entry differs from omega_i sign(u_ij)";
      }
    }
  }
  const double sum_violation = std::abs(weight_sum - 1.0);
  if (sum_violation > worst) {
    worst = sum_violation;
    if (sum_violation > tol) report.detail = "weights do not sum to 1";
  }

  report.certificate.max_rows = max_rows;
  report.certificate.weights = std::move(weights);
  report.weight_sum = weight_sum;
  report.worst_violation = worst;
  report.member = worst <= tol;
  return report;
}

MembershipReport nonneg_subgradient_membership(const Matrix& p,
                                               const Matrix& u, double tol) {
  require(p.rows() == u.rows() && p.cols() == u.cols(),
          "nonneg_subgradient_membership: shape mismatch");
  require(tol >= 0.0, "nonneg_subgradient_membership: tol must be >= 0");
  require((u.array() >= 0.0).all(),
          "nonneg_subgradient_membership: U has negative entries");
  MembershipReport report;
  report.certificate.p = p;

  if (u.size() == 0 || u.maxCoeff() == 0.0) {
    // At zero: sum over rows of the positive part of the row maximum <= 1.
    Vector weights = p.rowwise().maxCoeff().cwiseMax(0.0);
    report.weight_sum = weights.sum();
    for (Index i = 0; i < u.rows(); ++i)
      report.certificate.max_rows.push_back(i);
    report.certificate.weights = std::move(weights);
    report.worst_violation = std::max(0.0, report.weight_sum - 1.0);
    report.member = report.weight_sum <= 1.0 + tol;
    if (!report.member)
      report.detail = "positive-part weights exceed 1 at U = 0";
    return report;
  }

  const std::vector<Index> max_rows = max_row_set(u, tol);
  std::vector<bool> is_max(static_cast<size_t>(u.rows()), false);
  for (Index i : max_rows) is_max[static_cast<size_t>(i)] = true;

  double worst = 0.0;
  for (Index i = 0; i < u.rows(); ++i) {
    if (is_max[static_cast<size_t>(i)]) continue;
    for (Index j = 0; j < u.cols(); ++j) {
      const double violation = u(i, j) > tol
                                   ? std::abs(p(i, j))  // = 0 at positives
                                   : std::max(0.0, p(i, j));  // <= 0 at zeros
      if (violation > worst) {
        worst = violation;
        if (violation > tol) report.detail = "violation off the maximal rows";
      }
    }
  }

  Vector weights(static_cast<Index>(max_rows.size()));
  double weight_sum = 0.0;
  for (size_t k = 0; k < max_rows.size(); ++k) {
    const Index i = max_rows[k];
    const double omega = p.row(i).cwiseAbs().maxCoeff();
    weights[static_cast<Index>(k)] = omega;
    weight_sum += omega;
    for (Index j = 0; j < u.cols(); ++j) {
      if (u(i, j) <= tol) continue;  // zeros: within [-omega, omega] by choice
      const double violation = std::abs(p(i, j) - omega);
      if (violation > worst) {
        worst = violation;
        if (violation > tol)
          report.detail = "positive entry differs from omega_i";
      }
    }
  }
  const double sum_violation = std::abs(weight_sum - 1.0);
  if (sum_violation > worst) {
    worst = sum_violation;
    if (sum_violation > tol) report.detail = "weights do not sum to 1";
  }

  report.certificate.max_rows = max_rows;
  report.certificate.weights = std::move(weights);
  report.weight_sum = weight_sum;
  report.worst_violation = worst;
  report.member = worst <= tol;
  return report;
}

Matrix nearest_subgradient(const Matrix& c, const Matrix& u) {
  require(c.rows() == u.rows() && c.cols() == u.cols(),
          "nearest_subgradient: shape mismatch");
  const Index m = u.rows(), n = u.cols();

  if (norm_l1_inf(u) == 0.0) {
    // Project onto the unit l^{inf,1} ball: rows clamp to [-w_i, w_i] with
    // the allowances w solving a separable problem over the simplex.
    if (norm_inf_1(c) <= 1.0) return c;
    auto row_excess = [&](Index i, double w) {
      double g = 0.0;
      for (Index j = 0; j < n; ++j)
        g += std::max(std::abs(c(i, j)) - w, 0.0);
      return g;
    };
    auto allowance_sum = [&](double theta) {
      double total = 0.0;
      for (Index i = 0; i < m; ++i) {
        if (row_excess(i, 0.0) <= theta) continue;  // w_i = 0
        double hi = c.row(i).cwiseAbs().maxCoeff();
        total += bisect_increasing(
            [&](double w) { return theta - row_excess(i, w); }, 0.0, hi);
      }
      return total;
    };
    double theta_lo = 0.0, theta_hi = 1.0;
    while (allowance_sum(theta_hi) > 1.0) theta_hi *= 2.0;
    const double theta = bisect_increasing(
        [&](double t) { return 1.0 - allowance_sum(t); }, theta_lo, theta_hi);
    Matrix out(m, n);
    for (Index i = 0; i < m; ++i) {
      double w = 0.0;
      if (row_excess(i, 0.0) > theta) {
        const double hi = c.row(i).cwiseAbs().maxCoeff();
        w = bisect_increasing(
            [&](double x) { return theta - row_excess(i, x); }, 0.0, hi);
      }
      for (Index j = 0; j < n; ++j)
        out(i, j) = std::clamp(c(i, j), -w, w);
    }
    return out;
  }

  const std::vector<Index> max_rows = max_row_set(u, 1e-12);

  // Row cost derivative in the allowance omega; strictly increasing since
  // every maximal row has at least one nonzero entry.
  auto cost_slope = [&](Index i, double omega) {
    double slope = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (u(i, j) != 0.0) {
        const double sign = u(i, j) > 0.0 ? 1.0 : -1.0;
        slope += omega - c(i, j) * sign;
      } else {
        slope -= std::max(std::abs(c(i, j)) - omega, 0.0);
      }
    }
    return 2.0 * slope;
  };
  auto omega_of = [&](Index i, double theta) {
    if (cost_slope(i, 0.0) + theta >= 0.0) return 0.0;
    double hi = 1.0;
    while (cost_slope(i, hi) + theta < 0.0) hi *= 2.0;
    return bisect_increasing(
        [&](double w) { return cost_slope(i, w) + theta; }, 0.0, hi);
  };
  auto weight_sum = [&](double theta) {
    double total = 0.0;
    for (Index i : max_rows) total += omega_of(i, theta);
    return total;
  };

  double lo = -1.0, hi = 1.0;
  while (weight_sum(lo) < 1.0) lo *= 2.0;
  while (weight_sum(hi) > 1.0) hi *= 2.0;
  const double theta =
      bisect_increasing([&](double t) { return 1.0 - weight_sum(t); }, lo, hi);

  Matrix out = Matrix::Zero(m, n);
  double total = 0.0;
  std::vector<double> omegas;
  for (Index i : max_rows) {
    const double w = omega_of(i, theta);
    omegas.push_back(w);
    total += w;
  }
  // Rescale the tiny bisection slack so the weights sum to 1 exactly.
  const double scale = total > 0.0 ? 1.0 / total : 1.0;
  for (size_t k = 0; k < max_rows.size(); ++k) {
    const Index i = max_rows[k];
    const double w = omegas[k] * scale;
    for (Index j = 0; j < n; ++j) {
      if (u(i, j) != 0.0)
        out(i, j) = u(i, j) > 0.0 ? w : -w;
      else
        out(i, j) = std::clamp(c(i, j), -w, w);
    }
  }
  return out;
}

SourceConditionReport check_source_condition(const CoefficientMatrix& u_hat,
                                             const ForwardOperator& a,
                                             const DictionaryMatrix& b,
                                             double tol, int max_iter) {
  require(u_hat.values.rows() == a.in_dim() &&
              u_hat.values.cols() == b.atom_count(),
          "check_source_condition: shape mismatch");
  require(tol > 0.0 && max_iter >= 1, "check_source_condition: bad settings");

  const Matrix a_dense = a.to_dense();
  const Matrix& bv = b.values;
  // Projection onto the subspace {A^T Q B} is X -> P1 X P2 with the two
  // orthogonal projectors below; Q is recovered from the same factors.
  Eigen::CompleteOrthogonalDecomposition<Matrix> aat_dec(
      Matrix(a_dense * a_dense.transpose()));
  Eigen::CompleteOrthogonalDecomposition<Matrix> bbt_dec(
      Matrix(bv * bv.transpose()));

  auto recover_q = [&](const Matrix& x) -> Matrix {
    // Q = (A A^T)^+ A X B^T (B B^T)^+ done as two pseudo-solves.
    const Matrix left = aat_dec.solve(a_dense * x);       // L x N
    const Matrix right = left * bv.transpose();           // L x T
    return bbt_dec.solve(right.transpose()).transpose();  // L x T
  };

  SourceConditionReport report;
  Matrix x = nearest_subgradient(Matrix::Zero(u_hat.values.rows(),
                                              u_hat.values.cols()),
                                 u_hat.values);
  double residual = std::numeric_limits<double>::infinity();
  Matrix y;
  int k = 0;
  for (; k < max_iter; ++k) {
    Matrix q = recover_q(x);
    y = a_dense.transpose() * q * bv.transpose();  // affine projection of x
    Matrix x_next = nearest_subgradient(y, u_hat.values);
    const double next_residual = (x_next - y).norm();
    x = std::move(x_next);
    report.q = std::move(q);
    if (next_residual <= tol) {
      residual = next_residual;
      ++k;
      break;
    }
    // Stalled: the sets keep a positive distance.
    if (std::abs(next_residual - residual) <=
        1e-14 * std::max(1.0, next_residual)) {
      residual = next_residual;
      ++k;
      break;
    }
    residual = next_residual;
  }
  report.iterations = k;
  report.residual = residual;
  report.satisfied = residual <= tol;
  return report;
}

SupportMap predict_asymptotic_support(const ForwardOperator& a,
                                      const DataMatrix& w,
                                      const DictionaryMatrix& b,
                                      double tie_tol) {
  require(tie_tol >= 0.0, "predict_asymptotic_support: tie_tol must be >= 0");
  require(w.values.rows() == a.out_dim() &&
              w.values.cols() == b.sample_count(),
          "predict_asymptotic_support: shape mismatch");
  const Matrix y = a.apply_adjoint(w.values) * b.values;  // M x N
  SupportMap support;
  support.zero_tol = tie_tol;
  support.active.resize(static_cast<size_t>(y.rows()));
  support.argmax.resize(static_cast<size_t>(y.rows()));
  for (Index i = 0; i < y.rows(); ++i) {
    Index arg = 0;
    const double top = y.row(i).maxCoeff(&arg);
    support.argmax[static_cast<size_t>(i)] = arg;
    for (Index j = 0; j < y.cols(); ++j)
      if (y(i, j) >= top - tie_tol)
        support.active[static_cast<size_t>(i)].push_back(j);
  }
  return support;
}

SupportMap extract_support(const Matrix& u, double rel_tol) {
  require(rel_tol > 0.0 && rel_tol < 1.0,
          "extract_support: rel_tol must be in (0,1)");
  const double threshold = u.size() == 0 ? 0.0 : rel_tol * u.maxCoeff();
  SupportMap support;
  support.zero_tol = threshold;
  support.active.resize(static_cast<size_t>(u.rows()));
  support.argmax.assign(static_cast<size_t>(u.rows()), Index(-1));
  for (Index i = 0; i < u.rows(); ++i) {
    for (Index j = 0; j < u.cols(); ++j)
      if (u(i, j) > threshold)
        support.active[static_cast<size_t>(i)].push_back(j);
    if (!support.active[static_cast<size_t>(i)].empty()) {
      Index arg = 0;
      u.row(i).maxCoeff(&arg);
      support.argmax[static_cast<size_t>(i)] = arg;
    }
  }
  return support;
}

SupportMap extract_support(const CoefficientMatrix& u, double rel_tol) {
  return extract_support(u.values, rel_tol);
}

RecoveryInstance build_recovery_instance(Index m, Index n, Index t,
                                         std::uint64_t seed) {
  require(m >= 1 && n >= 1, "build_recovery_instance: bad dimensions");
  require(t >= n, "build_recovery_instance: need T >= N");
  std::mt19937_64 rng(seed);
  auto gaussian = [&rng]() {
    // Small local Box-Muller; avoids implementation-defined distributions.
    double u1 = 0.0;
    do {
      u1 = uniform01(rng);
    } while (u1 <= 0.0);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(6.283185307179586476925286766559 * u2);
  };

  Matrix raw(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) raw(i, j) = gaussian();
  // Orthogonal factor: invertible, so A^T is surjective.
  const Matrix ortho =
      Eigen::HouseholderQR<Matrix>(raw).householderQ() * Matrix::Identity(m, m);

  Matrix bv(t, n);
  for (Index k = 0; k < t; ++k)
    for (Index j = 0; j < n; ++j) bv(k, j) = gaussian();
  for (Index j = 0; j < n; ++j) bv.col(j) /= bv.col(j).norm();

  Matrix u_values = Matrix::Zero(m, n);
  std::vector<Index> atoms(static_cast<size_t>(m));
  for (Index i = 0; i < m; ++i) {
    const Index j = static_cast<Index>(uniform01(rng) * n) % n;
    atoms[static_cast<size_t>(i)] = j;
    u_values(i, j) = 0.5 + uniform01(rng);
  }

  RecoveryInstance instance;
  instance.a = ForwardOperator::Dense(ortho);
  instance.b = DictionaryMatrix(std::move(bv),
                                Vector::LinSpaced(t, 0.0, double(t - 1)),
                                Normalization::l2);
  instance.u_hat =
      CoefficientMatrix(std::move(u_values), {m, 1}, /*nonneg=*/true);
  instance.w = apply_forward(instance.a, instance.u_hat, instance.b);
  instance.true_atoms = std::move(atoms);
  return instance;
}

RecoveryInstance build_negative_instance(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Index m = 2, n = 4, t = 5;

  Matrix bv(t, n);
  for (Index k = 0; k < t; ++k)
    for (Index j = 0; j < n; ++j) bv(k, j) = uniform01(rng) + 0.1;
  for (Index j = 0; j < n; ++j) bv.col(j) /= bv.col(j).norm();

  const Index shared = static_cast<Index>(uniform01(rng) * n) % n;
  const double c_low = 0.3 + 0.2 * uniform01(rng);
  const double c_high = c_low + 0.2 + 0.3 * uniform01(rng);

  Matrix u_values = Matrix::Zero(m, n);
  u_values(0, shared) = c_low;
  u_values(1, shared) = c_high;

  // Both rows weighted equally: the ADMM iterates stay row-symmetric, so
  // the solver's limit spreads the mass evenly and cannot equal u_hat.
  Matrix a_row(1, m);
  a_row.setOnes();

  RecoveryInstance instance;
  instance.a = ForwardOperator::Dense(std::move(a_row));
  instance.b = DictionaryMatrix(std::move(bv),
                                Vector::LinSpaced(t, 0.0, double(t - 1)),
                                Normalization::l2);
  instance.u_hat =
      CoefficientMatrix(std::move(u_values), {m, 1}, /*nonneg=*/true);
  instance.w = apply_forward(instance.a, instance.u_hat, instance.b);
  instance.true_atoms = {shared, shared};
  return instance;
}

OneDimRecoveryReport check_1d_recovery(const DictionaryMatrix& b, Index j,
                                       double alpha_plus_beta,
                                       FidelityMode mode, const Vector& gamma) {
  const Index n = b.atom_count();
  const Index t = b.sample_count();
  require(j >= 0 && j < n, "check_1d_recovery: atom index out of range");
  require(alpha_plus_beta > 0.0 && alpha_plus_beta < 1.0,
          "check_1d_recovery: alpha + beta must lie in (0,1)");

  const double c = 1.0 - alpha_plus_beta;
  const double factor = (1.0 - c) / alpha_plus_beta;  // = 1 by construction

  OneDimRecoveryReport report;
  report.p.resize(n);
  if (mode == FidelityMode::l2) {
    Vector g = gamma.size() == 0 ? Vector::Ones(t) : gamma;
    require(g.size() == t, "check_1d_recovery: gamma length mismatch");
    require((g.array() != 0.0).all(), "check_1d_recovery: gamma must be != 0");
    const Vector weighted_j = g.cwiseProduct(b.values.col(j));
    for (Index k = 0; k < n; ++k)
      report.p[k] = factor * weighted_j.dot(g.cwiseProduct(b.values.col(k)));
  } else {
    // Data w = b_j; the 1/sqrt(w) weighting collapses the candidates to the
    // atom column sums.
    require((b.values.col(j).array() > 0.0).all(),
            "check_1d_recovery: kl mode needs strictly positive data");
    for (Index k = 0; k < n; ++k)
      report.p[k] = factor * b.values.col(k).sum();
  }

  constexpr double kTol = 1e-10;
  report.satisfied = std::abs(report.p[j] - 1.0) <= kTol;
  for (Index k = 0; k < n && report.satisfied; ++k) {
    if (k == j) continue;
    report.satisfied = std::abs(report.p[k]) <= 1.0 + kTol;
  }
  return report;
}

}  // namespace locsparse
