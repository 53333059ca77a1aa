#include "locsparse/solver.hpp"

#include <cmath>

#include "locsparse/norms.hpp"
#include "locsparse/projection.hpp"

namespace locsparse {

AdmmWorkspace::AdmmWorkspace(const ForwardOperator& a,
                             const DictionaryMatrix& b, const DataMatrix& w,
                             const SolverParams& params)
    : a_(a), b_(b), w_(w), params_(params) {
  params_.validate();
  const Index m = a.in_dim();
  const Index n = b.atom_count();
  const Index t = b.sample_count();
  require(w.values.rows() == a.out_dim() && w.values.cols() == t,
          "AdmmWorkspace: data dimensions inconsistent with A and B");
  shape_ = a.kind() == ForwardOperator::Kind::conv2d ? a.shape()
                                                     : SpatialShape{m, 1};

  u_ = Matrix::Zero(m, n);
  d_ = Matrix::Zero(m, n);
  z_ = Matrix::Zero(m, t);
  p_ = Matrix::Zero(m, n);
  q_ = Matrix::Zero(m, t);
  d_old_ = d_;
  z_old_ = z_;
  r1_ = Matrix::Zero(m, n);
  r2_ = Matrix::Zero(m, t);
  s_ = Matrix::Zero(m, n);
  lambda_ = params_.lambda0;
  mu_ = params_.mu0;

  btb_ = b.values.transpose() * b.values;
  atw_ = a.apply_adjoint(w.values);
  if (a.kind() == ForwardOperator::Kind::dense)
    a_gram_ = a.dense_matrix().transpose() * a.dense_matrix();
}

void AdmmWorkspace::set_support_mask(const SupportMap& support) {
  support.validate(u_.cols());
  require(support.row_count() == u_.rows(),
          "AdmmWorkspace: support row count mismatch");
  mask_ = support.active;
}

void AdmmWorkspace::begin_iteration() {
  d_old_ = d_;
  z_old_ = z_;
}

void AdmmWorkspace::refresh_u_factor() {
  if (u_factor_lambda_ == lambda_ && u_factor_mu_ == mu_) return;
  Matrix system = mu_ * btb_;
  system.diagonal().array() += lambda_;
  u_factor_.compute(system);
  require(u_factor_.info() == Eigen::Success,
          "AdmmWorkspace: U-system factorization failed");
  u_factor_lambda_ = lambda_;
  u_factor_mu_ = mu_;
}

void AdmmWorkspace::update_u() {
  refresh_u_factor();
  const Matrix rhs = lambda_ * (d_ - p_) + mu_ * ((z_ - q_) * b_.values);
  u_ = u_factor_.solve(rhs.transpose()).transpose();
}

void AdmmWorkspace::update_d() {
  const RowProjectionParams row_params{params_.v_cap, params_.beta, lambda_};
  const Matrix target = u_ + p_;
  if (!mask_) {
    d_ = project_matrix(target, row_params, shape_).values;
    return;
  }
  // Masked rows: project the gathered sub-vector, scatter back, zeros
  // elsewhere (exact projection onto the masked constraint set).
  d_.setZero();
  for (Index i = 0; i < d_.rows(); ++i) {
    const auto& cols = (*mask_)[static_cast<size_t>(i)];
    if (cols.empty()) continue;
    Vector g(static_cast<Index>(cols.size()));
    for (size_t k = 0; k < cols.size(); ++k) g[static_cast<Index>(k)] =
        target(i, cols[k]);
    const Vector proj = project_row(g, row_params);
    for (size_t k = 0; k < cols.size(); ++k)
      d_(i, cols[k]) = proj[static_cast<Index>(k)];
  }
}

void AdmmWorkspace::update_z() {
  const Matrix rhs = atw_ + mu_ * (u_ * b_.values.transpose() + q_);
  if (a_.kind() == ForwardOperator::Kind::dense) {
    if (z_factor_mu_ != mu_) {
      Matrix system = a_gram_;
      system.diagonal().array() += mu_;
      z_factor_.compute(system);
      require(z_factor_.info() == Eigen::Success,
              "AdmmWorkspace: Z-system factorization failed");
      z_factor_mu_ = mu_;
    }
    z_ = z_factor_.solve(rhs);
    return;
  }
  z_ = a_.normal_solve(rhs, mu_);
}

void AdmmWorkspace::compute_residuals() {
  r1_ = lambda_ * (d_ - u_);
  r2_ = mu_ * (z_ - u_ * b_.values.transpose());
  s_ = lambda_ * (d_old_ - d_) + mu_ * ((z_old_ - z_) * b_.values);
}

void AdmmWorkspace::dual_updates() {
  p_ -= d_ - u_;
  q_ -= z_ - u_ * b_.values.transpose();
}

void AdmmWorkspace::adapt_penalties() {
  if (iter_ >= params_.adapt_freeze_iter) return;
  const double nr1 = r1_.norm();
  const double nr2 = r2_.norm();
  const double ns = s_.norm();
  bool changed = false;
  if (nr1 > params_.eta1 * ns) {
    lambda_ *= params_.tau1;
    p_ /= params_.tau1;
    changed = true;
  } else if (ns > params_.eta1 * nr1) {
    lambda_ /= params_.tau1;
    p_ *= params_.tau1;
    changed = true;
  }
  if (nr2 > params_.eta2 * ns) {
    mu_ *= params_.tau2;
    q_ /= params_.tau2;
    changed = true;
  } else if (ns > params_.eta2 * nr2) {
    mu_ /= params_.tau2;
    q_ *= params_.tau2;
    changed = true;
  }
  if (changed) penalty_history_.push_back({lambda_, mu_});
}

Tolerances AdmmWorkspace::tolerances() const {
  const double m = static_cast<double>(u_.rows());
  const double n = static_cast<double>(u_.cols());
  const double t = static_cast<double>(z_.cols());
  Tolerances tol;
  tol.pri1 = std::sqrt(m * n) * params_.eps_abs +
             params_.eps_rel * std::max({u_.norm(), d_.norm(), 0.0});
  tol.pri2 =
      std::sqrt(m * t) * params_.eps_abs +
      params_.eps_rel *
          std::max({(u_ * b_.values.transpose()).norm(), z_.norm(), 0.0});
  tol.dual = std::sqrt(m * n) * params_.eps_abs +
             params_.eps_rel * (lambda_ * p_ + mu_ * q_ * b_.values).norm();
  return tol;
}

bool AdmmWorkspace::converged() const {
  const Tolerances tol = tolerances();
  return r1_.norm() <= tol.pri1 && r2_.norm() <= tol.pri2 &&
         s_.norm() <= tol.dual;
}

bool AdmmWorkspace::step() {
  begin_iteration();
  update_u();
  update_d();
  update_z();
  compute_residuals();
  dual_updates();
  adapt_penalties();
  ++iter_;
  return converged();
}

double AdmmWorkspace::objective_value(const Matrix& u) const {
  const CoefficientMatrix coeff(u, shape_);
  const Matrix residual = apply_forward(a_, coeff, b_).values - w_.values;
  return 0.5 * residual.squaredNorm() + params_.beta * u.sum();
}

double AdmmWorkspace::suboptimality_bound(double d_estimate) const {
  require(d_estimate >= 0.0, "suboptimality_bound: d must be >= 0");
  return p_.norm() * r1_.norm() + q_.norm() * r2_.norm() +
         d_estimate * s_.norm();
}

std::pair<CoefficientMatrix, SolveReport> AdmmWorkspace::run() {
  SolveReport report;
  report.residual_history.reserve(
      static_cast<size_t>(std::min(params_.max_iter, 4096)));
  bool done = false;
  while (iter_ < params_.max_iter) {
    done = step();
    report.residual_history.push_back({r1_.norm(), r2_.norm(), s_.norm()});
    if (done) break;
  }
  report.iterations = iter_;
  report.stop_reason = done ? StopReason::converged : StopReason::max_iter;
  report.penalty_history = penalty_history_;
  report.objective = objective_value(u_);
  report.final_tolerances = tolerances();
  report.final_lambda = lambda_;
  report.final_mu = mu_;
  return {CoefficientMatrix(u_, shape_), std::move(report)};
}

std::pair<CoefficientMatrix, SolveReport> solve(const ForwardOperator& a,
                                                const DictionaryMatrix& b,
                                                const DataMatrix& w,
                                                const SolverParams& params) {
  AdmmWorkspace workspace(a, b, w, params);
  return workspace.run();
}

CoefficientMatrix debias_on_support(const ForwardOperator& a,
                                    const DictionaryMatrix& b,
                                    const DataMatrix& w,
                                    const SupportMap& support,
                                    const SolverParams& base_params) {
  const SpatialShape shape = a.kind() == ForwardOperator::Kind::conv2d
                                 ? a.shape()
                                 : SpatialShape{a.in_dim(), 1};
  if (support.empty()) {
    return CoefficientMatrix(Matrix::Zero(a.in_dim(), b.atom_count()), shape,
                             /*nonneg=*/true);
  }
  SolverParams params = base_params;
  params.beta = 0.0;
  params.v_cap = 1e6 * std::max(1.0, w.values.norm());
  AdmmWorkspace workspace(a, b, w, params);
  workspace.set_support_mask(support);
  auto [u, report] = workspace.run();
  (void)u;
  // The D-iterate carries the mask and the sign constraint exactly.
  return CoefficientMatrix(workspace.d(), shape, /*nonneg=*/true);
}

}  // namespace locsparse
