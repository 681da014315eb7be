#pragma once

#include <cstdint>
#include <span>

#include "gradepred/matrix.hpp"
#include "gradepred/models.hpp"

namespace gradepred {

// Predicts the most frequent training grade (ties to the higher grade);
// class_scores are the training class frequencies.
class MajorityBaselineModel final : public TrainedModel {
 public:
  MajorityBaselineModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

  Grade majority() const noexcept { return majority_; }

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  ClassScores frequencies_{};
  Grade majority_;
};

// Uniform draw over the five grades. The draw is a pure function of the
// stored seed and the query row's bytes, so equal inputs give equal outputs
// and concurrent predicts need no shared state.
class RandomBaselineModel final : public TrainedModel {
 public:
  RandomBaselineModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

  static Grade draw(std::uint64_t seed, std::uint64_t counter) noexcept;

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;
};

// Stable 64-bit hash of a feature row's bit patterns.
std::uint64_t hash_row(std::span<const double> x) noexcept;

}  // namespace gradepred
