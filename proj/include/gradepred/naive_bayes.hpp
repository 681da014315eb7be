#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gradepred/matrix.hpp"
#include "gradepred/models.hpp"

namespace gradepred {

// Score given to classes absent from the training set.
inline constexpr double kAbsentClassScore = -1e300;

// Gaussian naive Bayes. Every per-class variance is smoothed by
// 1e-9 * (largest per-feature variance over the whole training set).
class NaiveBayesModel final : public TrainedModel {
 public:
  NaiveBayesModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

  double smoothing() const noexcept { return smoothing_; }
  bool has_class(Grade g) const noexcept { return present_[g.index()]; }
  double log_prior(Grade g) const noexcept { return log_prior_[g.index()]; }
  std::span<const double> means(Grade g) const noexcept { return means_[g.index()]; }
  std::span<const double> variances(Grade g) const noexcept { return variances_[g.index()]; }

  // log prior + sum of log normal densities; kAbsentClassScore for absent classes.
  ClassScores log_joint(std::span<const double> x) const noexcept;

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  std::array<bool, Grade::kCount> present_{};
  std::array<double, Grade::kCount> log_prior_{};
  std::array<std::vector<double>, Grade::kCount> means_;
  std::array<std::vector<double>, Grade::kCount> variances_;
  double smoothing_ = 0.0;
};

}  // namespace gradepred
