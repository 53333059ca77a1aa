#ifndef LOCSPARSE_RECOVERY_HPP_
#define LOCSPARSE_RECOVERY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "locsparse/forward.hpp"
#include "locsparse/support.hpp"
#include "locsparse/types.hpp"

namespace locsparse {

// A candidate element of the max-row-l1 norm subdifferential: zero off the
// maximal rows, weights omega >= 0 on them summing to 1 (<= 1 at U = 0).
struct SubgradientCertificate {
  Matrix p;
  std::vector<Index> max_rows;
  Vector weights;  // aligned with max_rows
};

struct MembershipReport {
  bool member = false;
  SubgradientCertificate certificate;
  double weight_sum = 0.0;
  double worst_violation = 0.0;
  std::string detail;
};

// P in the subdifferential of the l^{1,inf} norm at U, entrywise within tol.
MembershipReport subgradient_membership(const Matrix& p, const Matrix& u,
                                        double tol);

// Same for the nonnegative functional (max row sum restricted to U >= 0);
// throws on negative entries of U.
MembershipReport nonneg_subgradient_membership(const Matrix& p,
                                               const Matrix& u, double tol);

// Euclidean projection of C onto the subdifferential set at U; used to
// manufacture valid certificates and by the source-condition search.
Matrix nearest_subgradient(const Matrix& c, const Matrix& u);

struct SourceConditionReport {
  bool satisfied = false;
  Matrix q;                // L x T with A^T Q B nearest to the certificate set
  double residual = 0.0;   // final distance between the two sets' iterates
  int iterations = 0;
};

// Alternating projections between the subspace {A^T Q B} and the
// subdifferential set at u_hat. satisfied => u_hat is norm-minimizing;
// an inconclusive search reports satisfied = false with the residual.
SourceConditionReport check_source_condition(const CoefficientMatrix& u_hat,
                                             const ForwardOperator& a,
                                             const DictionaryMatrix& b,
                                             double tol, int max_iter = 5000);

// Row-wise argmax sets of Y = A^T W B within tie_tol; the support every
// solution collapses onto as the row cap tends to zero.
SupportMap predict_asymptotic_support(const ForwardOperator& a,
                                      const DataMatrix& w,
                                      const DictionaryMatrix& b,
                                      double tie_tol);

// Active set {(i,j) : u_ij > rel_tol * max(U)} plus per-row argmax.
SupportMap extract_support(const Matrix& u, double rel_tol);
SupportMap extract_support(const CoefficientMatrix& u, double rel_tol);

struct RecoveryInstance {
  ForwardOperator a;
  DictionaryMatrix b;
  CoefficientMatrix u_hat;
  DataMatrix w;
  std::vector<Index> true_atoms;  // J(i) per row
};

// Orthogonal A (so A^T is surjective), l2-normalized random B, exactly one
// positive coefficient per row, exact data. The recovery theorem applies.
RecoveryInstance build_recovery_instance(Index m, Index n, Index t,
                                         std::uint64_t seed);

// The L = 1 counterexample: two rows share the same atom with different
// coefficients, so at beta = 0 the stated ground truth is not the
// optimizer and the solver must land elsewhere.
RecoveryInstance build_negative_instance(std::uint64_t seed);

enum class FidelityMode { l2, kl };

struct OneDimRecoveryReport {
  bool satisfied = false;
  Vector p;  // closed-form subgradient candidates, one per atom
};

// One-pixel recovery check: evaluates the closed-form subgradient at a
// 1-sparse signal on atom j and tests p_j = 1, |p_n| <= 1. Mode l2 uses
// optional diagonal weights gamma; mode kl derives gamma = 1/sqrt(w) from
// the data and reduces to the l1-normalization condition.
OneDimRecoveryReport check_1d_recovery(const DictionaryMatrix& b, Index j,
                                       double alpha_plus_beta,
                                       FidelityMode mode,
                                       const Vector& gamma = Vector());

}  // namespace locsparse

#endif  // LOCSPARSE_RECOVERY_HPP_
