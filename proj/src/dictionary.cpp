#include "locsparse/dictionary.hpp"

#include <cmath>
#include <string>

namespace locsparse {
namespace {

// g0(x) = (1 - e^{-x})/x and g1(x) = (x - (1 - e^{-x}))/x^2 with their
// x -> 0 limits 1 and 1/2; series branch avoids cancellation.
double seg_g0(double x) {
  if (x < 1e-5) return 1.0 - x / 2.0 + x * x / 6.0;
  return -std::expm1(-x) / x;
}

double seg_g1(double x) {
  if (x < 1e-5) return 0.5 - x / 6.0 + x * x / 24.0;
  return (x + std::expm1(-x)) / (x * x);
}

}  // namespace

DictionaryMatrix build_kinetic_dictionary(const InputCurve& curve,
                                          const DecayGrid& decays,
                                          const Vector& time_grid) {
  require(time_grid.size() >= 1, "build_kinetic_dictionary: empty time grid");
  require(curve.samples.size() == time_grid.size(),
          "build_kinetic_dictionary: curve length != time grid length");
  curve.validate();
  decays.validate();

  const Index t_count = time_grid.size();
  const Index n = decays.params.size();
  Matrix b = Matrix::Zero(t_count, n);
  for (Index j = 0; j < n; ++j) {
    const double rate = decays.params[j];
    double acc = 0.0;  // integral up to t_k, decayed forward per segment
    for (Index k = 0; k + 1 < t_count; ++k) {
      const double dt = time_grid[k + 1] - time_grid[k];
      const double x = rate * dt;
      const double c0 = curve.samples[k];
      const double c1 = curve.samples[k + 1];
      acc = std::exp(-x) * acc +
            dt * (c0 * seg_g0(x) + (c1 - c0) * seg_g1(x));
      b(k + 1, j) = acc;
    }
  }
  return DictionaryMatrix(std::move(b), time_grid, Normalization::raw);
}

DictionaryMatrix normalize_columns(const DictionaryMatrix& b,
                                   Normalization mode) {
  require(mode != Normalization::raw,
          "normalize_columns: mode must be l2 or l1");
  Matrix values = b.values;
  for (Index j = 0; j < values.cols(); ++j) {
    const double norm = mode == Normalization::l2 ? values.col(j).norm()
                                                  : values.col(j).lpNorm<1>();
    if (norm == 0.0)
      throw ContractViolation("normalize_columns: column " +
                              std::to_string(j) + " is zero");
    values.col(j) /= norm;
  }
  return DictionaryMatrix(std::move(values), b.time_grid, mode);
}

double mutual_incoherence(const DictionaryMatrix& b) {
  const Index n = b.atom_count();
  require(n >= 2, "mutual_incoherence: needs at least two atoms");
  double worst = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double denom = b.values.col(i).squaredNorm();
    require(denom > 0.0, "mutual_incoherence: zero column");
    for (Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double value =
          std::abs(b.values.col(i).dot(b.values.col(j))) / denom;
      worst = std::max(worst, value);
    }
  }
  return worst;
}

ScalingReport check_scaling_condition(const DictionaryMatrix& b,
                                      const std::vector<Index>& row_support,
                                      double tol) {
  const Index n = b.atom_count();
  for (Index j : row_support)
    require(j >= 0 && j < n, "check_scaling_condition: index out of range");

  // Deduplicate used columns; the condition is per used column.
  std::vector<bool> used(static_cast<size_t>(n), false);
  for (Index j : row_support) used[static_cast<size_t>(j)] = true;

  ScalingReport report;
  for (Index j = 0; j < n; ++j) {
    if (!used[static_cast<size_t>(j)]) continue;
    const double norm = b.values.col(j).norm();
    if (std::abs(norm - 1.0) > tol) {
      report.satisfied = false;
      report.violations.push_back({j, Index(-1), norm});
    }
    for (Index k = 0; k < n; ++k) {
      if (k == j) continue;
      const double ip = std::abs(b.values.col(j).dot(b.values.col(k)));
      if (ip > 1.0 + tol) {
        report.satisfied = false;
        report.violations.push_back({j, k, ip});
      }
    }
  }
  return report;
}

InputCurve gamma_variate_curve(const Vector& time_grid, double tau0) {
  require(tau0 > 0.0, "gamma_variate_curve: tau0 must be > 0");
  Vector samples(time_grid.size());
  for (Index k = 0; k < time_grid.size(); ++k)
    samples[k] = time_grid[k] * std::exp(-time_grid[k] / tau0);
  const double peak = tau0 * std::exp(-1.0);  // maximum of t e^{-t/tau0}
  samples /= peak;
  return InputCurve{std::move(samples), "gamma-variate, tau0=" +
                                            std::to_string(tau0)};
}

DecayGrid log_decay_grid(Index n, double lo, double hi) {
  require(n >= 1 && lo > 0.0 && hi > lo, "log_decay_grid: bad range");
  Vector params(n);
  if (n == 1) {
    params[0] = lo;
  } else {
    const double step = std::log(hi / lo) / static_cast<double>(n - 1);
    for (Index j = 0; j < n; ++j)
      params[j] = lo * std::exp(step * static_cast<double>(j));
  }
  return DecayGrid{std::move(params)};
}

}  // namespace locsparse
