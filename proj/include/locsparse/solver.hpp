#ifndef LOCSPARSE_SOLVER_HPP_
#define LOCSPARSE_SOLVER_HPP_

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "locsparse/forward.hpp"
#include "locsparse/support.hpp"
#include "locsparse/types.hpp"

namespace locsparse {

struct SolverParams {
  double v_cap = 0.0;   // row-sum cap, required > 0
  double beta = 0.1;
  double lambda0 = 0.5;
  double mu0 = 0.1;
  double eps_abs = 1e-6;
  double eps_rel = 1e-4;
  double eta1 = 10.0;
  double eta2 = 10.0;
  double tau1 = 2.0;
  double tau2 = 2.0;
  int max_iter = 2000;
  int adapt_freeze_iter = 100;  // penalties fixed from this iteration on

  void validate() const {
    require(v_cap > 0.0, "SolverParams: v_cap must be > 0");
    require(beta >= 0.0, "SolverParams: beta must be >= 0");
    require(lambda0 > 0.0 && mu0 > 0.0, "SolverParams: penalties must be > 0");
    require(eps_abs > 0.0 && eps_rel >= 0.0, "SolverParams: bad tolerances");
    require(eta1 > 1.0 && eta2 > 1.0, "SolverParams: eta must be > 1");
    require(tau1 > 1.0 && tau2 > 1.0, "SolverParams: tau must be > 1");
    require(max_iter >= 1, "SolverParams: max_iter must be >= 1");
    require(adapt_freeze_iter >= 0, "SolverParams: bad adapt_freeze_iter");
  }
};

enum class StopReason { converged, max_iter };

struct Tolerances {
  double pri1 = 0.0;
  double pri2 = 0.0;
  double dual = 0.0;
};

struct SolveReport {
  int iterations = 0;
  StopReason stop_reason = StopReason::max_iter;
  // (||R1||_F, ||R2||_F, ||S||_F) per iteration.
  std::vector<std::array<double, 3>> residual_history;
  // (lambda, mu) recorded whenever an adaptation changes either.
  std::vector<std::array<double, 2>> penalty_history;
  double objective = 0.0;
  Tolerances final_tolerances;
  double final_lambda = 0.0;
  double final_mu = 0.0;
};

// One ADMM solve: splits D = U and Z = U B^T, alternates the three exact
// subproblem solves, and tracks residuals and penalties. Iterates start
// at zero. The individual update methods are public so each step can be
// exercised in isolation; call begin_iteration() before manual stepping.
class AdmmWorkspace {
 public:
  AdmmWorkspace(const ForwardOperator& a, const DictionaryMatrix& b,
                const DataMatrix& w, const SolverParams& params);

  // Restricts D (hence the limit) to the given support; rows outside it
  // stay exactly zero.
  void set_support_mask(const SupportMap& support);

  void begin_iteration();  // snapshots D, Z for the dual residual
  void update_u();         // U (lambda I + mu B^T B) = lambda(D-P) + mu(Z-Q)B
  void update_d();         // row-wise capped prox of U + P
  void update_z();         // (A^T A + mu I) Z = A^T W + mu (U B^T + Q)
  void compute_residuals();
  void dual_updates();     // P -= D - U;  Q -= Z - U B^T
  void adapt_penalties();  // no-op once iter >= adapt_freeze_iter

  Tolerances tolerances() const;
  bool converged() const;  // all three residuals within tolerances
  bool step();             // one full loop body; returns converged()
  std::pair<CoefficientMatrix, SolveReport> run();

  double objective_value(const Matrix& u) const;
  // ||P|| ||R1|| + ||Q|| ||R2|| + d ||S||; diagnostic only.
  double suboptimality_bound(double d_estimate) const;

  Matrix& u() { return u_; }
  Matrix& d() { return d_; }
  Matrix& z() { return z_; }
  Matrix& p() { return p_; }
  Matrix& q() { return q_; }
  const Matrix& u() const { return u_; }
  const Matrix& d() const { return d_; }
  const Matrix& z() const { return z_; }
  const Matrix& p() const { return p_; }
  const Matrix& q() const { return q_; }
  const Matrix& r1() const { return r1_; }
  const Matrix& r2() const { return r2_; }
  const Matrix& s() const { return s_; }
  double lambda() const { return lambda_; }
  double mu() const { return mu_; }
  int iter() const { return iter_; }
  const std::vector<std::array<double, 2>>& penalty_history() const {
    return penalty_history_;
  }

 private:
  const Matrix& u_system_llt();  // cached factor of (lambda I + mu B^T B)
  void refresh_u_factor();

  const ForwardOperator& a_;
  const DictionaryMatrix& b_;
  const DataMatrix& w_;
  SolverParams params_;
  SpatialShape shape_;

  Matrix u_, d_, z_, p_, q_;
  Matrix d_old_, z_old_;
  Matrix r1_, r2_, s_;
  double lambda_, mu_;
  int iter_ = 0;

  Matrix btb_;             // B^T B, fixed
  Matrix atw_;             // A^T W, fixed
  Eigen::LLT<Matrix> u_factor_;
  double u_factor_lambda_ = -1.0, u_factor_mu_ = -1.0;
  Eigen::LLT<Matrix> z_factor_;  // dense operators only
  Matrix a_gram_;                // A^T A for the dense path
  double z_factor_mu_ = -1.0;

  std::optional<std::vector<std::vector<Index>>> mask_;
  std::vector<std::array<double, 2>> penalty_history_;
};

// Minimizes (1/2)||A U B^T - W||_F^2 + beta sum_ij u_ij over u_ij >= 0,
// sum_j u_ij <= v_cap. Reaching max_iter is reported, not thrown.
std::pair<CoefficientMatrix, SolveReport> solve(const ForwardOperator& a,
                                                const DictionaryMatrix& b,
                                                const DataMatrix& w,
                                                const SolverParams& params);

// Second pass: nonnegative least squares restricted to the support
// (beta = 0, cap inflated to 1e6 * max(1, ||W||_F), hard zero mask).
CoefficientMatrix debias_on_support(const ForwardOperator& a,
                                    const DictionaryMatrix& b,
                                    const DataMatrix& w,
                                    const SupportMap& support,
                                    const SolverParams& base_params = {});

}  // namespace locsparse

#endif  // LOCSPARSE_SOLVER_HPP_
