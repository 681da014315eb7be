#include "gradepred/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gradepred {
namespace {

constexpr double kTau = 1e-12;

double dual_objective(std::span<const double> alpha, std::span<const double> gradient, std::span<const double> p) {
  double f = 0.0;
  for (std::size_t t = 0; t < alpha.size(); ++t) f += alpha[t] * (gradient[t] + p[t]);
  return -0.5 * f;
}

double compute_rho(std::span<const double> alpha, std::span<const double> gradient, std::span<const int> y,
                   double c) {
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  std::size_t n_free = 0;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    const double yg = y[t] * gradient[t];
    if (alpha[t] >= c) {
      if (y[t] == -1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else if (alpha[t] <= 0.0) {
      if (y[t] == +1) {
        ub = std::min(ub, yg);
      } else {
        lb = std::max(lb, yg);
      }
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  if (n_free > 0) return sum_free / static_cast<double>(n_free);
  if (!std::isfinite(ub)) return std::isfinite(lb) ? lb : 0.0;
  if (!std::isfinite(lb)) return ub;
  return 0.5 * (ub + lb);
}

}  // namespace

SmoResult solve_smo(const Matrix& q, std::span<const double> p, std::span<const int> y, double c,
                    const SmoOptions& options) {
  const std::size_t n = p.size();
  if (q.rows() != n || q.cols() != n || y.size() != n) throw std::invalid_argument("solve_smo: size mismatch");
  if (!(c > 0.0)) throw std::invalid_argument("solve_smo: C must be positive");

  SmoResult r;
  r.alpha.assign(n, 0.0);
  r.gradient.assign(p.begin(), p.end());
  auto& alpha = r.alpha;
  auto& g = r.gradient;
  const auto at_upper = [&](std::size_t t) { return alpha[t] >= c; };
  const auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  const std::size_t max_iter = options.max_passes * std::max<std::size_t>(n, 1);
  while (true) {
    // Working set: i maximizes -y G over I_up, j minimizes the second-order
    // objective estimate among the violators in I_low.
    double gmax = -std::numeric_limits<double>::infinity();
    double gmax2 = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == +1) {
        if (!at_upper(t) && -g[t] > gmax) {
          gmax = -g[t];
          i = static_cast<std::ptrdiff_t>(t);
        }
      } else if (!at_lower(t) && g[t] > gmax) {
        gmax = g[t];
        i = static_cast<std::ptrdiff_t>(t);
      }
    }
    std::ptrdiff_t j = -1;
    double obj_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < n && i >= 0; ++t) {
      const auto ui = static_cast<std::size_t>(i);
      double grad_diff = 0.0;
      double quad = 0.0;
      if (y[t] == +1) {
        if (at_lower(t)) continue;
        gmax2 = std::max(gmax2, g[t]);
        grad_diff = gmax + g[t];
        quad = q(ui, ui) + q(t, t) - 2.0 * y[ui] * q(ui, t);
      } else {
        if (at_upper(t)) continue;
        gmax2 = std::max(gmax2, -g[t]);
        grad_diff = gmax - g[t];
        quad = q(ui, ui) + q(t, t) + 2.0 * y[ui] * q(ui, t);
      }
      if (grad_diff > 0.0) {
        const double obj = -(grad_diff * grad_diff) / (quad > 0.0 ? quad : kTau);
        if (obj < obj_min) {
          obj_min = obj;
          j = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    if (i < 0 || j < 0 || gmax + gmax2 < options.tolerance) {
      r.converged = true;
      break;
    }
    if (r.iterations >= max_iter) break;
    ++r.iterations;

    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    const double old_i = alpha[ui];
    const double old_j = alpha[uj];
    if (y[ui] != y[uj]) {
      double quad = q(ui, ui) + q(uj, uj) + 2.0 * q(ui, uj);
      if (quad <= 0.0) quad = kTau;
      const double delta = (-g[ui] - g[uj]) / quad;
      const double diff = alpha[ui] - alpha[uj];
      alpha[ui] += delta;
      alpha[uj] += delta;
      if (diff > 0.0) {
        if (alpha[uj] < 0.0) {
          alpha[uj] = 0.0;
          alpha[ui] = diff;
        }
      } else if (alpha[ui] < 0.0) {
        alpha[ui] = 0.0;
        alpha[uj] = -diff;
      }
      if (diff > 0.0) {
        if (alpha[ui] > c) {
          alpha[ui] = c;
          alpha[uj] = c - diff;
        }
      } else if (alpha[uj] > c) {
        alpha[uj] = c;
        alpha[ui] = c + diff;
      }
    } else {
      double quad = q(ui, ui) + q(uj, uj) - 2.0 * q(ui, uj);
      if (quad <= 0.0) quad = kTau;
      const double delta = (g[ui] - g[uj]) / quad;
      const double sum = alpha[ui] + alpha[uj];
      alpha[ui] -= delta;
      alpha[uj] += delta;
      if (sum > c) {
        if (alpha[ui] > c) {
          alpha[ui] = c;
          alpha[uj] = sum - c;
        }
      } else if (alpha[uj] < 0.0) {
        alpha[uj] = 0.0;
        alpha[ui] = sum;
      }
      if (sum > c) {
        if (alpha[uj] > c) {
          alpha[uj] = c;
          alpha[ui] = sum - c;
        }
      } else if (alpha[ui] < 0.0) {
        alpha[ui] = 0.0;
        alpha[uj] = sum;
      }
    }

    const double d_i = alpha[ui] - old_i;
    const double d_j = alpha[uj] - old_j;
    for (std::size_t t = 0; t < n; ++t) g[t] += q(t, ui) * d_i + q(t, uj) * d_j;
    if (options.trace_objective) r.objective_trace.push_back(dual_objective(alpha, g, p));
  }

  r.rho = compute_rho(alpha, g, y, c);
  r.dual_objective = dual_objective(alpha, g, p);
  return r;
}

double kkt_violation(const Matrix& q, std::span<const double> p, std::span<const int> y, double c,
                     std::span<const double> alpha) {
  const std::size_t n = p.size();
  double m_up = -std::numeric_limits<double>::infinity();
  double m_low = std::numeric_limits<double>::infinity();
  for (std::size_t t = 0; t < n; ++t) {
    double grad = p[t];
    for (std::size_t s = 0; s < n; ++s) grad += q(t, s) * alpha[s];
    const double v = -y[t] * grad;
    const bool in_up = (y[t] == +1 && alpha[t] < c) || (y[t] == -1 && alpha[t] > 0.0);
    const bool in_low = (y[t] == +1 && alpha[t] > 0.0) || (y[t] == -1 && alpha[t] < c);
    if (in_up) m_up = std::max(m_up, v);
    if (in_low) m_low = std::min(m_low, v);
  }
  if (!std::isfinite(m_up) || !std::isfinite(m_low)) return 0.0;
  return std::max(0.0, m_up - m_low);
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept {
  return std::exp(-gamma * squared_distance(a, b));
}

Matrix rbf_kernel_matrix(const Matrix& x, double gamma) {
  Matrix k(x.rows(), x.rows());
  for (std::size_t i = 0; i < x.rows(); ++i) {
    k(i, i) = 1.0;
    for (std::size_t j = i + 1; j < x.rows(); ++j) k(i, j) = k(j, i) = rbf_kernel(x.row(i), x.row(j), gamma);
  }
  return k;
}

double BinarySvm::decision(std::span<const double> kernel_row) const noexcept {
  double s = -rho;
  for (std::size_t j = 0; j < coef.size(); ++j) s += coef[j] * kernel_row[j];
  return s;
}

BinarySvm fit_binary_svm(const Matrix& kernel, std::span<const int> labels, double c, const SmoOptions& options) {
  const std::size_t n = labels.size();
  Matrix q(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) q(i, j) = labels[i] * labels[j] * kernel(i, j);
  }
  const std::vector<double> p(n, -1.0);
  BinarySvm svm;
  svm.solution = solve_smo(q, p, labels, c, options);
  svm.rho = svm.solution.rho;
  for (std::size_t i = 0; i < n; ++i) {
    if (svm.solution.alpha[i] > 0.0) {
      svm.support.push_back(i);
      svm.coef.push_back(labels[i] * svm.solution.alpha[i]);
    }
  }
  return svm;
}

SvmRbfModel::SvmRbfModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y,
                         const SmoOptions& options)
    : TrainedModel(spec, x.cols()), gamma_(1.0 / static_cast<double>(x.cols())), train_x_(x) {
  detail::check_training_set(x, y, 2);
  classes_.assign(y.begin(), y.end());
  std::sort(classes_.begin(), classes_.end());
  classes_.erase(std::unique(classes_.begin(), classes_.end()), classes_.end());

  const Matrix kernel = rbf_kernel_matrix(x, gamma_);
  for (std::size_t a = 0; a < classes_.size(); ++a) {
    for (std::size_t b = a + 1; b < classes_.size(); ++b) {
      Pair pair{classes_[a], classes_[b], {}, {}};
      std::vector<int> labels;
      for (std::size_t r = 0; r < y.size(); ++r) {
        if (y[r] == pair.positive || y[r] == pair.negative) {
          pair.rows.push_back(r);
          labels.push_back(y[r] == pair.positive ? +1 : -1);
        }
      }
      const Matrix sub = kernel.select_rows(pair.rows).select_columns(pair.rows);
      pair.svm = fit_binary_svm(sub, labels, spec.C, options);
      converged_ = converged_ && pair.svm.solution.converged;
      pairs_.push_back(std::move(pair));
    }
  }
}

std::vector<double> SvmRbfModel::decision_values(std::span<const double> x) const {
  std::vector<double> k(train_x_.rows(), 0.0);
  std::vector<bool> done(train_x_.rows(), false);
  std::vector<double> out;
  out.reserve(pairs_.size());
  std::vector<double> row;
  for (const auto& pair : pairs_) {
    row.clear();
    for (std::size_t s : pair.svm.support) {
      const std::size_t r = pair.rows[s];
      if (!done[r]) {
        k[r] = rbf_kernel(x, train_x_.row(r), gamma_);
        done[r] = true;
      }
      row.push_back(k[r]);
    }
    out.push_back(pair.svm.decision(row));
  }
  return out;
}

PredictionOutcome SvmRbfModel::do_predict(std::span<const double> x) const {
  ClassScores scores{};
  if (pairs_.empty()) {
    scores[classes_.front().index()] = 1.0;
    return PredictionOutcome::from_scores(scores);
  }
  ClassScores votes{};
  ClassScores margin{};
  const auto values = decision_values(x);
  for (std::size_t p = 0; p < pairs_.size(); ++p) {
    const Grade winner = values[p] > 0.0 ? pairs_[p].positive : pairs_[p].negative;
    votes[winner.index()] += 1.0;
    margin[winner.index()] += std::abs(values[p]);
  }
  for (std::size_t g = 0; g < Grade::kCount; ++g) scores[g] = votes[g] + 1e-6 * margin[g];
  return PredictionOutcome::from_scores(scores);
}

}  // namespace gradepred
