#include "locsparse/forward.hpp"

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <vector>

namespace locsparse {
namespace detail {

// Periodic 2-D convolution on an m1 x m2 grid, diagonalized by the DFT.
// Images are the columns of M x C matrices, flattened as (r, c) -> r*m2 + c,
// which matches FFTW's row-major layout.
class PeriodicConv {
 public:
  PeriodicConv(const Matrix& kernel, SpatialShape shape) : shape_(shape) {
    const Index m1 = shape.m1, m2 = shape.m2;
    n_real_ = m1 * m2;
    n_cplx_ = m1 * (m2 / 2 + 1);

    std::vector<double> real_buf(static_cast<size_t>(n_real_), 0.0);
    std::vector<std::complex<double>> cplx_buf(static_cast<size_t>(n_cplx_));
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fwd_ = fftw_plan_dft_r2c_2d(static_cast<int>(m1), static_cast<int>(m2),
                                real_buf.data(),
                                reinterpret_cast<fftw_complex*>(cplx_buf.data()),
                                flags);
    bwd_ = fftw_plan_dft_c2r_2d(static_cast<int>(m1), static_cast<int>(m2),
                                reinterpret_cast<fftw_complex*>(cplx_buf.data()),
                                real_buf.data(), flags);
    require(fwd_ != nullptr && bwd_ != nullptr,
            "PeriodicConv: FFTW plan creation failed");

    // Embed the centered stencil at the origin with wraparound; offsets
    // larger than the grid alias, which is exactly periodic convolution.
    const Index kr = kernel.rows(), kc = kernel.cols();
    const Index cr = kr / 2, cc = kc / 2;
    for (Index a = 0; a < kr; ++a) {
      for (Index b = 0; b < kc; ++b) {
        const Index r = ((a - cr) % m1 + m1) % m1;
        const Index c = ((b - cc) % m2 + m2) % m2;
        real_buf[static_cast<size_t>(r * m2 + c)] += kernel(a, b);
      }
    }
    khat_.resize(static_cast<size_t>(n_cplx_));
    fftw_execute_dft_r2c(fwd_, real_buf.data(),
                         reinterpret_cast<fftw_complex*>(khat_.data()));
  }

  ~PeriodicConv() {
    fftw_destroy_plan(fwd_);
    fftw_destroy_plan(bwd_);
  }

  PeriodicConv(const PeriodicConv&) = delete;
  PeriodicConv& operator=(const PeriodicConv&) = delete;

  Index size() const { return n_real_; }

  // y = A x (adjoint=false) or y = A^T x (adjoint=true).
  void apply(const double* x, double* y, bool adjoint) const {
    std::vector<double> rbuf(x, x + n_real_);
    std::vector<std::complex<double>> cbuf(static_cast<size_t>(n_cplx_));
    fftw_execute_dft_r2c(fwd_, rbuf.data(),
                         reinterpret_cast<fftw_complex*>(cbuf.data()));
    for (Index k = 0; k < n_cplx_; ++k)
      cbuf[k] *= adjoint ? std::conj(khat_[k]) : khat_[k];
    fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(cbuf.data()),
                         y);
    const double scale = 1.0 / static_cast<double>(n_real_);
    for (Index k = 0; k < n_real_; ++k) y[k] *= scale;
  }

  // z = (A^T A + mu I)^{-1} r; the symbol of A^T A is |khat|^2.
  void normal_solve(const double* r, double* z, double mu) const {
    std::vector<double> rbuf(r, r + n_real_);
    std::vector<std::complex<double>> cbuf(static_cast<size_t>(n_cplx_));
    fftw_execute_dft_r2c(fwd_, rbuf.data(),
                         reinterpret_cast<fftw_complex*>(cbuf.data()));
    for (Index k = 0; k < n_cplx_; ++k)
      cbuf[k] /= std::norm(khat_[k]) + mu;
    fftw_execute_dft_c2r(bwd_, reinterpret_cast<fftw_complex*>(cbuf.data()),
                         z);
    const double scale = 1.0 / static_cast<double>(n_real_);
    for (Index k = 0; k < n_real_; ++k) z[k] *= scale;
  }

 private:
  SpatialShape shape_;
  Index n_real_ = 0;
  Index n_cplx_ = 0;
  std::vector<std::complex<double>> khat_;
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

}  // namespace detail

ForwardOperator ForwardOperator::Dense(Matrix a) {
  require(a.rows() >= 1 && a.cols() >= 1, "ForwardOperator: empty matrix");
  require(a.allFinite(), "ForwardOperator: non-finite entry");
  ForwardOperator op;
  op.kind_ = Kind::dense;
  op.in_dim_ = a.cols();
  op.out_dim_ = a.rows();
  op.shape_ = {a.cols(), 1};
  op.dense_ = std::move(a);
  return op;
}

ForwardOperator ForwardOperator::Conv2d(Matrix kernel, SpatialShape shape) {
  require(shape.m1 >= 1 && shape.m2 >= 1, "ForwardOperator: empty grid");
  require(kernel.size() >= 1 && kernel.allFinite(),
          "ForwardOperator: bad kernel");
  ForwardOperator op;
  op.kind_ = Kind::conv2d;
  op.in_dim_ = shape.pixel_count();
  op.out_dim_ = shape.pixel_count();
  op.shape_ = shape;
  op.kernel_ = std::move(kernel);
  op.conv_ = std::make_shared<detail::PeriodicConv>(op.kernel_, shape);
  return op;
}

ForwardOperator ForwardOperator::Identity(Index m, SpatialShape shape) {
  require(shape.pixel_count() == m, "ForwardOperator: shape mismatch");
  Matrix delta(1, 1);
  delta(0, 0) = 1.0;
  return Conv2d(std::move(delta), shape);
}

const Matrix& ForwardOperator::dense_matrix() const {
  require(kind_ == Kind::dense, "ForwardOperator: not a dense operator");
  return dense_;
}

const Matrix& ForwardOperator::kernel() const {
  require(kind_ == Kind::conv2d, "ForwardOperator: not a conv2d operator");
  return kernel_;
}

Matrix ForwardOperator::apply(const Matrix& x) const {
  require(x.rows() == in_dim_, "ForwardOperator::apply: dimension mismatch");
  if (kind_ == Kind::dense) return dense_ * x;
  Matrix y(out_dim_, x.cols());
  for (Index c = 0; c < x.cols(); ++c)
    conv_->apply(x.col(c).data(), y.col(c).data(), /*adjoint=*/false);
  return y;
}

Matrix ForwardOperator::apply_adjoint(const Matrix& y) const {
  require(y.rows() == out_dim_,
          "ForwardOperator::apply_adjoint: dimension mismatch");
  if (kind_ == Kind::dense) return dense_.transpose() * y;
  Matrix x(in_dim_, y.cols());
  for (Index c = 0; c < y.cols(); ++c)
    conv_->apply(y.col(c).data(), x.col(c).data(), /*adjoint=*/true);
  return x;
}

Matrix ForwardOperator::normal_solve(const Matrix& r, double mu) const {
  require(mu > 0.0, "ForwardOperator::normal_solve: mu must be > 0");
  require(r.rows() == in_dim_,
          "ForwardOperator::normal_solve: dimension mismatch");
  if (kind_ == Kind::dense) {
    Matrix gram = dense_.transpose() * dense_;
    gram.diagonal().array() += mu;
    return Eigen::LLT<Matrix>(gram).solve(r);
  }
  Matrix z(in_dim_, r.cols());
  for (Index c = 0; c < r.cols(); ++c)
    conv_->normal_solve(r.col(c).data(), z.col(c).data(), mu);
  return z;
}

Matrix ForwardOperator::to_dense() const {
  if (kind_ == Kind::dense) return dense_;
  return apply(Matrix::Identity(in_dim_, in_dim_));
}

DataMatrix apply_forward(const ForwardOperator& a, const CoefficientMatrix& u,
                         const DictionaryMatrix& b) {
  require(u.values.rows() == a.in_dim(),
          "apply_forward: operator/coefficient dimension mismatch");
  require(u.values.cols() == b.atom_count(),
          "apply_forward: coefficient/dictionary dimension mismatch");
  const Index n = b.atom_count(), t = b.sample_count();
  // A(U) first touches N columns, U B^T first makes T; both orders agree.
  if (n <= t) {
    return DataMatrix(a.apply(u.values) * b.values.transpose());
  }
  return DataMatrix(a.apply(u.values * b.values.transpose()));
}

Matrix gaussian_kernel(double sigma) {
  require(sigma > 0.0, "gaussian_kernel: sigma must be > 0");
  const Index radius = static_cast<Index>(std::ceil(3.0 * sigma));
  const Index size = 2 * radius + 1;
  Matrix kernel(size, size);
  for (Index a = 0; a < size; ++a) {
    for (Index b = 0; b < size; ++b) {
      const double dr = static_cast<double>(a - radius);
      const double dc = static_cast<double>(b - radius);
      kernel(a, b) = std::exp(-(dr * dr + dc * dc) / (2.0 * sigma * sigma));
    }
  }
  kernel /= kernel.sum();
  return kernel;
}

}  // namespace locsparse
