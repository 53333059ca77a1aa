#ifndef LOCSPARSE_PROJECTION_HPP_
#define LOCSPARSE_PROJECTION_HPP_

#include "locsparse/types.hpp"

namespace locsparse {

// Parameters of the per-row problem
//   min_d (lambda/2)||d - g||^2 + beta * sum_j d_j
//   s.t.  d >= 0,  sum_j d_j <= v_cap.
struct RowProjectionParams {
  double v_cap;
  double beta = 0.0;
  double lambda = 1.0;

  void validate() const {
    require(v_cap > 0.0, "RowProjectionParams: v_cap must be > 0");
    require(beta >= 0.0, "RowProjectionParams: beta must be >= 0");
    require(lambda > 0.0, "RowProjectionParams: lambda must be > 0");
  }
};

// Unique minimizer of the row problem. Shift h = g - (beta/lambda)*1,
// clip at zero; if the sum still exceeds v_cap, subtract the capped-simplex
// threshold found by sorting h in descending order.
Vector project_row(const Vector& g, const RowProjectionParams& params);

// project_row applied to every row independently; rows of the result sum
// to at most v_cap and are nonnegative.
CoefficientMatrix project_matrix(const Matrix& g,
                                 const RowProjectionParams& params,
                                 SpatialShape shape = {0, 0});

}  // namespace locsparse

#endif  // LOCSPARSE_PROJECTION_HPP_
