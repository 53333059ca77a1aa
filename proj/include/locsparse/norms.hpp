#ifndef LOCSPARSE_NORMS_HPP_
#define LOCSPARSE_NORMS_HPP_

#include "locsparse/types.hpp"

namespace locsparse {

// max_i sum_j |u_ij| (dual pairing partner of norm_inf_1).
inline double norm_l1_inf(const Matrix& u) {
  if (u.size() == 0) return 0.0;
  return u.cwiseAbs().rowwise().sum().maxCoeff();
}

inline double norm_l1_inf(const CoefficientMatrix& u) {
  return norm_l1_inf(u.values);
}

// sum_i max_j |p_ij|.
inline double norm_inf_1(const Matrix& p) {
  if (p.size() == 0) return 0.0;
  return p.cwiseAbs().rowwise().maxCoeff().sum();
}

// max over rows of the count of entries with |u_ij| > zero_tol.
inline Index norm_l0_inf(const Matrix& u, double zero_tol = 0.0) {
  require(zero_tol >= 0.0, "norm_l0_inf: zero_tol must be >= 0");
  Index best = 0;
  for (Index i = 0; i < u.rows(); ++i) {
    const Index count = (u.row(i).cwiseAbs().array() > zero_tol).count();
    best = std::max(best, count);
  }
  return best;
}

inline Index norm_l0_inf(const CoefficientMatrix& u, double zero_tol = 0.0) {
  return norm_l0_inf(u.values, zero_tol);
}

}  // namespace locsparse

#endif  // LOCSPARSE_NORMS_HPP_
