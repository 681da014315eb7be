#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "gradepred/matrix.hpp"
#include "gradepred/models.hpp"
#include "gradepred/svm.hpp"

namespace gradepred {

inline constexpr double kRidgeDamping = 1e-6;

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  bool converged = false;
};

// Jacobi-preconditioned conjugate gradient for a symmetric positive
// (semi-)definite operator, starting from zero.
CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> rhs, std::span<const double> diagonal, double rel_tol,
                            std::size_t max_iter);

// Rounds a continuous prediction to a grade: clamp to [1,5], then round half
// away from zero. class_scores[g] = -|y - g|.
PredictionOutcome grade_from_continuous(double y_hat);

// Minimum-norm ridge least squares with an unpenalized intercept:
// (Xc'Xc/n + lambda I) w = Xc'yc/n on column-centered data. When n < d the
// equivalent n x n system (XcXc' + n lambda I) a = yc, w = Xc'a, is solved
// instead.
class LeastSquaresModel final : public TrainedModel {
 public:
  LeastSquaresModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

  double predict_continuous(std::span<const double> x) const noexcept;
  std::span<const double> weights() const noexcept { return weights_; }
  double intercept() const noexcept { return intercept_; }
  std::size_t cg_iterations() const noexcept { return cg_iterations_; }

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  std::vector<double> weights_;
  double intercept_ = 0.0;
  std::size_t cg_iterations_ = 0;
};

// Linear-kernel epsilon-insensitive SVR solved with the shared SMO solver.
class EpsilonSvrModel final : public TrainedModel {
 public:
  EpsilonSvrModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y, const SmoOptions& options = {});

  double predict_continuous(std::span<const double> x) const noexcept;

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  std::vector<double> weights_;  // sum_i (alpha_i - alpha_i*) x_i
  double rho_ = 0.0;
};

}  // namespace gradepred
