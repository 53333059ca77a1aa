#ifndef LOCSPARSE_FORWARD_HPP_
#define LOCSPARSE_FORWARD_HPP_

#include <memory>

#include "locsparse/types.hpp"

namespace locsparse {

namespace detail {
class PeriodicConv;  // FFT machinery, see forward.cpp
}

// Spatial operator A, either an explicit L x M matrix or a periodic
// 2-D convolution (L = M). Immutable after construction.
class ForwardOperator {
 public:
  enum class Kind { dense, conv2d };

  ForwardOperator() = default;  // empty; assign from a factory before use

  static ForwardOperator Dense(Matrix a);
  // kernel is a (2r+1) x (2r+1) stencil centered on its middle entry;
  // boundary handling is periodic so A^T A + mu I is diagonal in the DFT
  // basis.
  static ForwardOperator Conv2d(Matrix kernel, SpatialShape shape);
  static ForwardOperator Identity(Index m, SpatialShape shape);

  Kind kind() const { return kind_; }
  Index in_dim() const { return in_dim_; }    // M
  Index out_dim() const { return out_dim_; }  // L
  SpatialShape shape() const { return shape_; }
  const Matrix& dense_matrix() const;
  const Matrix& kernel() const;

  // X is M x C, applied column by column; returns L x C.
  Matrix apply(const Matrix& x) const;
  // Y is L x C; returns M x C. Equals application of the flipped kernel
  // for the conv2d variant.
  Matrix apply_adjoint(const Matrix& y) const;
  // Solves (A^T A + mu I) X = R column by column, mu > 0.
  Matrix normal_solve(const Matrix& r, double mu) const;
  // Materializes A as a dense L x M matrix (analysis paths only).
  Matrix to_dense() const;

 private:
  Kind kind_ = Kind::dense;
  Index in_dim_ = 0;
  Index out_dim_ = 0;
  SpatialShape shape_;
  Matrix dense_;
  Matrix kernel_;
  std::shared_ptr<const detail::PeriodicConv> conv_;
};

// W = A U B^T. Picks the cheaper multiplication order; both commute.
DataMatrix apply_forward(const ForwardOperator& a, const CoefficientMatrix& u,
                         const DictionaryMatrix& b);

// Truncated Gaussian stencil with the given standard deviation (pixels),
// radius ceil(3*sigma), normalized to sum 1.
Matrix gaussian_kernel(double sigma);

}  // namespace locsparse

#endif  // LOCSPARSE_FORWARD_HPP_
