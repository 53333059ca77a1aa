// Test-only reference implementations, kept independent of the library
// code paths they check.
#ifndef LOCSPARSE_TESTS_ORACLES_HPP_
#define LOCSPARSE_TESTS_ORACLES_HPP_

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "locsparse/projection.hpp"
#include "locsparse/types.hpp"

namespace oracles {

using locsparse::Index;
using locsparse::Matrix;
using locsparse::Vector;

inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

inline double gaussian(std::mt19937_64& rng) {
  double u1 = 0.0;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 0.0);
  return std::sqrt(-2.0 * std::log(u1)) *
         std::cos(6.283185307179586476925286766559 * uniform01(rng));
}

inline Matrix random_matrix(std::mt19937_64& rng, Index rows, Index cols,
                            double lo = -1.0, double hi = 1.0) {
  Matrix m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = uniform(rng, lo, hi);
  return m;
}

inline double loop_norm_l1_inf(const Matrix& u) {
  double best = 0.0;
  for (Index i = 0; i < u.rows(); ++i) {
    double sum = 0.0;
    for (Index j = 0; j < u.cols(); ++j) sum += std::abs(u(i, j));
    best = std::max(best, sum);
  }
  return best;
}

inline double loop_norm_inf_1(const Matrix& p) {
  double total = 0.0;
  for (Index i = 0; i < p.rows(); ++i) {
    double row_max = 0.0;
    for (Index j = 0; j < p.cols(); ++j)
      row_max = std::max(row_max, std::abs(p(i, j)));
    total += row_max;
  }
  return total;
}

inline Index loop_norm_l0_inf(const Matrix& u, double zero_tol) {
  Index best = 0;
  for (Index i = 0; i < u.rows(); ++i) {
    Index count = 0;
    for (Index j = 0; j < u.cols(); ++j)
      if (std::abs(u(i, j)) > zero_tol) ++count;
    best = std::max(best, count);
  }
  return best;
}

// W_lk = sum_i sum_j a_li u_ij b_kj evaluated literally.
inline Matrix triple_loop_forward(const Matrix& a, const Matrix& u,
                                  const Matrix& b) {
  Matrix w = Matrix::Zero(a.rows(), b.rows());
  for (Index l = 0; l < a.rows(); ++l)
    for (Index k = 0; k < b.rows(); ++k)
      for (Index i = 0; i < a.cols(); ++i)
        for (Index j = 0; j < u.cols(); ++j)
          w(l, k) += a(l, i) * u(i, j) * b(k, j);
  return w;
}

// Exhaustive active-set solver for the row problem
//   min (lambda/2)||d - g||^2 + beta sum d  s.t. d >= 0, sum d <= v_cap:
// every positive-set / cap-mode combination yields a stationary candidate;
// the feasible one with the smallest objective is the minimizer.
inline Vector active_set_projection(const Vector& g,
                                    const locsparse::RowProjectionParams& p) {
  const Index n = g.size();
  const double feas_tol = 1e-10;
  auto objective = [&](const Vector& d) {
    return 0.5 * p.lambda * (d - g).squaredNorm() + p.beta * d.sum();
  };
  Vector best = Vector::Zero(n);
  double best_objective = objective(best);

  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Index> support;
    double g_sum = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (mask & (1u << j)) {
        support.push_back(j);
        g_sum += g[j];
      }
    }
    const double size = static_cast<double>(support.size());

    // Cap inactive: d_j = g_j - beta/lambda on the support.
    {
      Vector d = Vector::Zero(n);
      bool ok = true;
      double sum = 0.0;
      for (Index j : support) {
        d[j] = g[j] - p.beta / p.lambda;
        sum += d[j];
        ok = ok && d[j] >= -feas_tol;
      }
      if (ok && sum <= p.v_cap + feas_tol) {
        const double value = objective(d.cwiseMax(0.0));
        if (value < best_objective) {
          best_objective = value;
          best = d.cwiseMax(0.0);
        }
      }
    }
    // Cap active: theta = lambda (sum g_S - v)/|S| - beta >= 0.
    {
      const double theta = p.lambda * (g_sum - p.v_cap) / size - p.beta;
      if (theta >= -feas_tol) {
        Vector d = Vector::Zero(n);
        bool ok = true;
        for (Index j : support) {
          d[j] = g[j] - (p.beta + theta) / p.lambda;
          ok = ok && d[j] >= -feas_tol;
        }
        if (ok) {
          const double value = objective(d.cwiseMax(0.0));
          if (value < best_objective) {
            best_objective = value;
            best = d.cwiseMax(0.0);
          }
        }
      }
    }
  }
  return best;
}

// Trapezoid on a refine-times denser grid, with C_A interpolated linearly
// between its samples.
inline double refined_quadrature(const Vector& curve, const Vector& grid,
                                 double rate, Index target, Index refine) {
  auto curve_at = [&](double t) {
    Index seg = 0;
    while (seg + 2 < grid.size() && grid[seg + 1] < t) ++seg;
    const double w = (t - grid[seg]) / (grid[seg + 1] - grid[seg]);
    return curve[seg] + w * (curve[seg + 1] - curve[seg]);
  };
  const double t_end = grid[target];
  const Index steps = refine * (grid.size() - 1);
  double acc = 0.0;
  double prev_t = grid[0];
  double prev_f = curve_at(prev_t) * std::exp(-rate * (t_end - prev_t));
  for (Index s = 1; s <= steps; ++s) {
    const double t =
        grid[0] + (t_end - grid[0]) * static_cast<double>(s) /
                      static_cast<double>(steps);
    const double f = curve_at(t) * std::exp(-rate * (t_end - t));
    acc += 0.5 * (t - prev_t) * (f + prev_f);
    prev_t = t;
    prev_f = f;
  }
  return acc;
}

inline double pair_loop_incoherence(const Matrix& b) {
  double worst = 0.0;
  for (Index i = 0; i < b.cols(); ++i)
    for (Index j = 0; j < b.cols(); ++j) {
      if (i == j) continue;
      double dot = 0.0, denom = 0.0;
      for (Index k = 0; k < b.rows(); ++k) {
        dot += b(k, i) * b(k, j);
        denom += b(k, i) * b(k, i);
      }
      worst = std::max(worst, std::abs(dot) / denom);
    }
  return worst;
}

}  // namespace oracles

#endif  // LOCSPARSE_TESTS_ORACLES_HPP_
