#include "gradepred/knn.hpp"

#include <algorithm>
#include <numeric>
#include <utility>

namespace gradepred {

KnnModel::KnnModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y)
    : TrainedModel(spec, x.cols()), train_x_(x), train_y_(y.begin(), y.end()) {
  detail::check_training_set(x, y, 1);
  k_ = std::min(static_cast<std::size_t>(spec.k), x.rows());
}

std::vector<std::size_t> KnnModel::neighbours(std::span<const double> x) const {
  std::vector<std::pair<double, std::size_t>> dist(train_x_.rows());
  for (std::size_t r = 0; r < train_x_.rows(); ++r) dist[r] = {squared_distance(x, train_x_.row(r)), r};
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(k_), dist.end());
  std::vector<std::size_t> out(k_);
  for (std::size_t i = 0; i < k_; ++i) out[i] = dist[i].second;
  return out;
}

PredictionOutcome KnnModel::do_predict(std::span<const double> x) const {
  const auto nn = neighbours(x);
  ClassScores votes{};
  for (std::size_t r : nn) votes[train_y_[r].index()] += 1.0;
  const double top = *std::max_element(votes.begin(), votes.end());
  Grade winner = train_y_[nn.front()];
  for (std::size_t r : nn) {
    if (votes[train_y_[r].index()] == top) {
      winner = train_y_[r];
      break;
    }
  }
  ClassScores scores{};
  for (std::size_t g = 0; g < Grade::kCount; ++g) scores[g] = votes[g] / static_cast<double>(nn.size());
  prefer_on_tie(scores, winner);
  return PredictionOutcome::from_scores(scores);
}

}  // namespace gradepred
