#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gradepred/matrix.hpp"
#include "gradepred/models.hpp"

namespace gradepred {

// Euclidean k-nearest neighbours with k = min(spec.k, n). Distance ties go to
// the lower training row; vote ties go to the class of the nearest neighbour
// among the tied classes. class_scores are vote fractions.
class KnnModel final : public TrainedModel {
 public:
  KnnModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

  std::size_t effective_k() const noexcept { return k_; }
  // Training rows of the k nearest neighbours, nearest first.
  std::vector<std::size_t> neighbours(std::span<const double> x) const;

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  Matrix train_x_;
  std::vector<Grade> train_y_;
  std::size_t k_;
};

}  // namespace gradepred
