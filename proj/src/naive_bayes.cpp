#include "gradepred/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace gradepred {

NaiveBayesModel::NaiveBayesModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y)
    : TrainedModel(spec, x.cols()) {
  detail::check_training_set(x, y, 1);
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();

  double max_var = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += x(r, c);
    mean /= static_cast<double>(n);
    double sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) sq += (x(r, c) - mean) * (x(r, c) - mean);
    max_var = std::max(max_var, sq / static_cast<double>(n));
  }
  // All-constant training data would leave zero variances; fall back to an
  // absolute floor.
  smoothing_ = max_var > 0.0 ? 1e-9 * max_var : 1e-9;

  std::array<std::size_t, Grade::kCount> counts{};
  for (Grade g : y) ++counts[g.index()];
  for (std::size_t k = 0; k < Grade::kCount; ++k) {
    present_[k] = counts[k] > 0;
    if (!present_[k]) continue;
    log_prior_[k] = std::log(static_cast<double>(counts[k]) / static_cast<double>(n));
    auto& mu = means_[k];
    auto& var = variances_[k];
    mu.assign(d, 0.0);
    var.assign(d, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r].index() != k) continue;
      for (std::size_t c = 0; c < d; ++c) mu[c] += x(r, c);
    }
    for (double& m : mu) m /= static_cast<double>(counts[k]);
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r].index() != k) continue;
      for (std::size_t c = 0; c < d; ++c) var[c] += (x(r, c) - mu[c]) * (x(r, c) - mu[c]);
    }
    for (double& v : var) v = v / static_cast<double>(counts[k]) + smoothing_;
  }
}

ClassScores NaiveBayesModel::log_joint(std::span<const double> x) const noexcept {
  ClassScores scores{};
  for (std::size_t k = 0; k < Grade::kCount; ++k) {
    if (!present_[k]) {
      scores[k] = kAbsentClassScore;
      continue;
    }
    double s = log_prior_[k];
    for (std::size_t c = 0; c < x.size(); ++c) {
      const double var = variances_[k][c];
      const double diff = x[c] - means_[k][c];
      s += -0.5 * std::log(2.0 * std::numbers::pi * var) - diff * diff / (2.0 * var);
    }
    scores[k] = s;
  }
  return scores;
}

PredictionOutcome NaiveBayesModel::do_predict(std::span<const double> x) const {
  return PredictionOutcome::from_scores(log_joint(x));
}

}  // namespace gradepred
