#include "gradepred/baselines.hpp"

#include <bit>

#include "gradepred/rng.hpp"

namespace gradepred {

MajorityBaselineModel::MajorityBaselineModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y)
    : TrainedModel(spec, x.cols()) {
  detail::check_training_set(x, y, 1);
  for (Grade g : y) frequencies_[g.index()] += 1.0;
  std::size_t best = 0;
  for (std::size_t k = 0; k < Grade::kCount; ++k) {
    frequencies_[k] /= static_cast<double>(y.size());
    if (frequencies_[k] >= frequencies_[best]) best = k;
  }
  majority_ = Grade::from_index(best);
}

PredictionOutcome MajorityBaselineModel::do_predict(std::span<const double>) const {
  ClassScores scores = frequencies_;
  prefer_on_tie(scores, majority_);
  return PredictionOutcome::from_scores(scores);
}

RandomBaselineModel::RandomBaselineModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y)
    : TrainedModel(spec, x.cols()) {
  detail::check_training_set(x, y, 1);
}

Grade RandomBaselineModel::draw(std::uint64_t seed, std::uint64_t counter) noexcept {
  const double u = unit_from_key(derive_key(seed, {counter}));
  return Grade::from_index(static_cast<std::size_t>(u * static_cast<double>(Grade::kCount)));
}

PredictionOutcome RandomBaselineModel::do_predict(std::span<const double> x) const {
  ClassScores scores{};
  scores[draw(spec().seed, hash_row(x)).index()] = 1.0;
  return PredictionOutcome::from_scores(scores);
}

std::uint64_t hash_row(std::span<const double> x) noexcept {
  std::uint64_t h = mix64(x.size());
  for (double v : x) h = mix64(h ^ std::bit_cast<std::uint64_t>(v + 0.0));
  return h;
}

}  // namespace gradepred
