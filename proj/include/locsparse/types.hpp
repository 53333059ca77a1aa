#ifndef LOCSPARSE_TYPES_HPP_
#define LOCSPARSE_TYPES_HPP_

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace locsparse {

using Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Contract violations (bad shapes, invalid parameters) throw this.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what)
      : std::invalid_argument(what) {}
};

inline void require(bool cond, const char* what) {
  if (!cond) throw ContractViolation(what);
}

// 2-D pixel grid (m1 rows, m2 cols) backing the row index of a
// coefficient matrix: pixel (r, c) maps to row r*m2 + c.
struct SpatialShape {
  Index m1 = 0;
  Index m2 = 0;

  Index pixel_count() const { return m1 * m2; }
  bool operator==(const SpatialShape&) const = default;
};

// M x N coefficients; row i holds the dictionary weights of pixel i.
struct CoefficientMatrix {
  Matrix values;
  SpatialShape spatial_shape;
  bool nonnegative = false;

  CoefficientMatrix() = default;
  CoefficientMatrix(Matrix v, SpatialShape shape, bool nonneg = false)
      : values(std::move(v)), spatial_shape(shape), nonnegative(nonneg) {
    require(spatial_shape.pixel_count() == values.rows(),
            "CoefficientMatrix: spatial_shape does not match row count");
  }

  Index pixel_count() const { return values.rows(); }
  Index atom_count() const { return values.cols(); }

  void validate() const {
    require(values.allFinite(), "CoefficientMatrix: non-finite entry");
    if (nonnegative)
      require((values.array() >= 0.0).all(),
              "CoefficientMatrix: negative entry in nonnegative matrix");
  }
};

enum class Normalization { raw, l2, l1 };

inline const char* to_string(Normalization n) {
  switch (n) {
    case Normalization::raw: return "raw";
    case Normalization::l2: return "l2";
    case Normalization::l1: return "l1";
  }
  return "?";
}

// T x N temporal dictionary; column j is one basis vector sampled on
// time_grid.
struct DictionaryMatrix {
  Matrix values;
  Vector time_grid;
  Normalization normalization = Normalization::raw;

  DictionaryMatrix() = default;
  DictionaryMatrix(Matrix v, Vector grid,
                   Normalization norm = Normalization::raw)
      : values(std::move(v)), time_grid(std::move(grid)), normalization(norm) {
    require(time_grid.size() == values.rows(),
            "DictionaryMatrix: time grid length != row count");
    for (Index k = 0; k + 1 < time_grid.size(); ++k)
      require(time_grid[k] < time_grid[k + 1],
              "DictionaryMatrix: time grid must be strictly increasing");
  }

  Index sample_count() const { return values.rows(); }
  Index atom_count() const { return values.cols(); }

  void validate(double tol = 1e-12) const {
    require(values.allFinite(), "DictionaryMatrix: non-finite entry");
    if (normalization == Normalization::raw) return;
    for (Index j = 0; j < values.cols(); ++j) {
      const double n = normalization == Normalization::l2
                           ? values.col(j).norm()
                           : values.col(j).lpNorm<1>();
      require(std::abs(n - 1.0) <= tol,
              "DictionaryMatrix: column norm violates normalization flag");
    }
  }
};

// L x T measurements.
struct DataMatrix {
  Matrix values;

  DataMatrix() = default;
  explicit DataMatrix(Matrix v) : values(std::move(v)) {}

  Index detector_count() const { return values.rows(); }
  Index sample_count() const { return values.cols(); }

  void validate() const {
    require(values.allFinite(), "DataMatrix: non-finite entry");
  }
};

}  // namespace locsparse

#endif  // LOCSPARSE_TYPES_HPP_
