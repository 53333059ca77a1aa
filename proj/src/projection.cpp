#include "locsparse/projection.hpp"

#include <algorithm>
#include <vector>

namespace locsparse {
namespace {

// In-place row projection; `sorted` is reusable scratch.
void project_row_inplace(double* row, Index n, const RowProjectionParams& p,
                         std::vector<double>& sorted) {
  const double shift = p.beta / p.lambda;
  double clipped_sum = 0.0;
  for (Index j = 0; j < n; ++j) {
    row[j] -= shift;
    clipped_sum += std::max(row[j], 0.0);
  }
  if (clipped_sum <= p.v_cap) {  // Case a: cap inactive
    for (Index j = 0; j < n; ++j) row[j] = std::max(row[j], 0.0);
    return;
  }
  // Case b: the cap binds; theta solves sum_{j in I}(h_j - theta) = v_cap
  // over the active set found from the descending sort (stable, so ties
  // keep their original order; the minimizer is unique either way).
  sorted.assign(row, row + n);
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double prefix = 0.0;
  double theta = 0.0;
  for (Index j = 0; j < n; ++j) {
    prefix += sorted[static_cast<size_t>(j)];
    const double candidate = (prefix - p.v_cap) / static_cast<double>(j + 1);
    if (sorted[static_cast<size_t>(j)] - candidate > 0.0) theta = candidate;
  }
  for (Index j = 0; j < n; ++j) row[j] = std::max(row[j] - theta, 0.0);
}

}  // namespace

Vector project_row(const Vector& g, const RowProjectionParams& params) {
  params.validate();
  require(g.allFinite(), "project_row: non-finite input");
  Vector d = g;
  std::vector<double> scratch;
  project_row_inplace(d.data(), d.size(), params, scratch);
  return d;
}

CoefficientMatrix project_matrix(const Matrix& g,
                                 const RowProjectionParams& params,
                                 SpatialShape shape) {
  params.validate();
  require(g.allFinite(), "project_matrix: non-finite input");
  if (shape.pixel_count() == 0) shape = {g.rows(), 1};

  // Row-major copy so each row is contiguous; rows are independent.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> d = g;
  std::vector<double> scratch;
  for (Index i = 0; i < d.rows(); ++i)
    project_row_inplace(d.row(i).data(), d.cols(), params, scratch);
  return CoefficientMatrix(Matrix(d), shape, /*nonneg=*/true);
}

}  // namespace locsparse
