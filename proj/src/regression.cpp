#include "gradepred/regression.hpp"

#include <algorithm>
#include <cmath>

namespace gradepred {

CgResult conjugate_gradient(const std::function<void(std::span<const double>, std::span<double>)>& apply,
                            std::span<const double> rhs, std::span<const double> diagonal, double rel_tol,
                            std::size_t max_iter) {
  const std::size_t n = rhs.size();
  CgResult out;
  out.x.assign(n, 0.0);
  std::vector<double> r(rhs.begin(), rhs.end());
  std::vector<double> z(n);
  std::vector<double> dir(n);
  std::vector<double> ad(n);
  const auto precondition = [&] {
    for (std::size_t i = 0; i < n; ++i) z[i] = diagonal[i] > 0.0 ? r[i] / diagonal[i] : r[i];
  };

  const double rhs_norm = std::sqrt(dot(rhs, rhs));
  if (rhs_norm == 0.0) {
    out.converged = true;
    return out;
  }
  precondition();
  dir = z;
  double rz = dot(r, z);
  while (out.iterations < max_iter) {
    apply(dir, ad);
    const double curvature = dot(dir, ad);
    if (curvature <= 0.0) break;
    const double step = rz / curvature;
    for (std::size_t i = 0; i < n; ++i) {
      out.x[i] += step * dir[i];
      r[i] -= step * ad[i];
    }
    ++out.iterations;
    if (std::sqrt(dot(r, r)) <= rel_tol * rhs_norm) {
      out.converged = true;
      break;
    }
    precondition();
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i) dir[i] = z[i] + beta * dir[i];
  }
  return out;
}

PredictionOutcome grade_from_continuous(double y_hat) {
  const double clamped = std::clamp(y_hat, static_cast<double>(Grade::kMin), static_cast<double>(Grade::kMax));
  ClassScores scores{};
  for (std::size_t g = 0; g < Grade::kCount; ++g) scores[g] = -std::abs(clamped - static_cast<double>(g + 1));
  prefer_on_tie(scores, Grade(static_cast<int>(std::round(clamped))));
  return PredictionOutcome::from_scores(scores);
}

LeastSquaresModel::LeastSquaresModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y)
    : TrainedModel(spec, x.cols()), weights_(x.cols(), 0.0) {
  detail::check_training_set(x, y, 2);
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const double nd = static_cast<double>(n);

  std::vector<double> mean(d, 0.0);
  double y_mean = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) mean[c] += x(r, c);
    y_mean += y[r].value();
  }
  for (double& m : mean) m /= nd;
  y_mean /= nd;

  Matrix xc = x;
  std::vector<double> yc(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < d; ++c) xc(r, c) -= mean[c];
    yc[r] = y[r].value() - y_mean;
  }

  constexpr double kTol = 1e-12;
  if (n < d) {
    // Row-space system; w = Xc' a keeps the solution minimum-norm.
    Matrix gram(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) gram(i, j) = gram(j, i) = dot(xc.row(i), xc.row(j));
    }
    const double damping = nd * kRidgeDamping;
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = gram(i, i) + damping;
    const auto apply = [&](std::span<const double> v, std::span<double> out) {
      for (std::size_t i = 0; i < n; ++i) out[i] = dot(gram.row(i), v) + damping * v[i];
    };
    const auto cg = conjugate_gradient(apply, yc, diag, kTol, 20 * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) weights_[c] += cg.x[r] * xc(r, c);
    }
    cg_iterations_ = cg.iterations;
    converged_ = cg.converged;
  } else {
    std::vector<double> rhs(d, 0.0);
    std::vector<double> diag(d, kRidgeDamping);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < d; ++c) {
        rhs[c] += xc(r, c) * yc[r] / nd;
        diag[c] += xc(r, c) * xc(r, c) / nd;
      }
    }
    std::vector<double> tmp(n);
    const auto apply = [&](std::span<const double> v, std::span<double> out) {
      for (std::size_t r = 0; r < n; ++r) tmp[r] = dot(xc.row(r), v);
      for (std::size_t c = 0; c < d; ++c) out[c] = kRidgeDamping * v[c];
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < d; ++c) out[c] += xc(r, c) * tmp[r] / nd;
      }
    };
    auto cg = conjugate_gradient(apply, rhs, diag, kTol, 20 * d);
    weights_ = std::move(cg.x);
    cg_iterations_ = cg.iterations;
    converged_ = cg.converged;
  }
  intercept_ = y_mean - dot(weights_, mean);
}

double LeastSquaresModel::predict_continuous(std::span<const double> x) const noexcept {
  return intercept_ + dot(weights_, x);
}

PredictionOutcome LeastSquaresModel::do_predict(std::span<const double> x) const {
  return grade_from_continuous(predict_continuous(x));
}

EpsilonSvrModel::EpsilonSvrModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y,
                                 const SmoOptions& options)
    : TrainedModel(spec, x.cols()), weights_(x.cols(), 0.0) {
  detail::check_training_set(x, y, 2);
  const std::size_t n = x.rows();
  Matrix linear(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) linear(i, j) = linear(j, i) = dot(x.row(i), x.row(j));
  }
  // Variables [alpha; alpha*] with signs [+1; -1].
  Matrix q(2 * n, 2 * n);
  std::vector<double> p(2 * n);
  std::vector<int> signs(2 * n);
  for (std::size_t i = 0; i < 2 * n; ++i) {
    signs[i] = i < n ? +1 : -1;
    const double target = y[i % n].value();
    p[i] = i < n ? spec.epsilon - target : spec.epsilon + target;
  }
  for (std::size_t i = 0; i < 2 * n; ++i) {
    for (std::size_t j = 0; j < 2 * n; ++j) q(i, j) = signs[i] * signs[j] * linear(i % n, j % n);
  }
  const auto sol = solve_smo(q, p, signs, spec.C, options);
  converged_ = sol.converged;
  rho_ = sol.rho;
  for (std::size_t i = 0; i < n; ++i) {
    const double coef = sol.alpha[i] - sol.alpha[i + n];
    if (coef == 0.0) continue;
    for (std::size_t c = 0; c < x.cols(); ++c) weights_[c] += coef * x(i, c);
  }
}

double EpsilonSvrModel::predict_continuous(std::span<const double> x) const noexcept {
  return dot(weights_, x) - rho_;
}

PredictionOutcome EpsilonSvrModel::do_predict(std::span<const double> x) const {
  return grade_from_continuous(predict_continuous(x));
}

}  // namespace gradepred
