#include "gradepred/decision_tree.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>

namespace gradepred {
namespace {

__extension__ using wide_int = __int128;

// A split scores sum_k cL_k^2 / nL + sum_k cR_k^2 / nR; larger means lower
// weighted Gini. Kept as a fraction so ties compare exactly.
struct SplitScore {
  std::int64_t num = 0;
  std::int64_t den = 1;

  bool operator>(const SplitScore& o) const noexcept {
    return static_cast<wide_int>(num) * o.den > static_cast<wide_int>(o.num) * den;
  }
};

std::int64_t sum_squares(const ClassCounts& c) noexcept {
  std::int64_t s = 0;
  for (auto v : c) s += static_cast<std::int64_t>(v) * static_cast<std::int64_t>(v);
  return s;
}

SplitScore split_score(const ClassCounts& left, std::size_t n_left, const ClassCounts& right, std::size_t n_right) {
  const auto nl = static_cast<std::int64_t>(n_left);
  const auto nr = static_cast<std::int64_t>(n_right);
  return {sum_squares(left) * nr + sum_squares(right) * nl, nl * nr};
}

bool is_pure(const ClassCounts& c) noexcept {
  return std::count_if(c.begin(), c.end(), [](std::size_t v) { return v > 0; }) <= 1;
}

}  // namespace

double gini_impurity(const ClassCounts& counts) noexcept {
  const double n = static_cast<double>(std::accumulate(counts.begin(), counts.end(), std::size_t{0}));
  if (n == 0.0) return 0.0;
  double s = 1.0;
  for (auto c : counts) s -= (static_cast<double>(c) / n) * (static_cast<double>(c) / n);
  return s;
}

DecisionTreeModel::DecisionTreeModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y)
    : TrainedModel(spec, x.cols()) {
  detail::check_training_set(x, y, 1);
  std::vector<std::vector<std::size_t>> sorted(x.cols(), std::vector<std::size_t>(x.rows()));
  for (std::size_t f = 0; f < x.cols(); ++f) {
    auto& idx = sorted[f];
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return x(a, f) < x(b, f); });
  }
  grow(x, y, std::move(sorted));
}

// sorted[f] holds this node's rows ordered by feature f.
std::size_t DecisionTreeModel::grow(const Matrix& x, std::span<const Grade> y,
                                    std::vector<std::vector<std::size_t>> sorted) {
  const std::size_t id = nodes_.size();
  nodes_.emplace_back();
  const auto& rows = sorted.front();
  const std::size_t n = rows.size();
  ClassCounts counts{};
  for (std::size_t r : rows) ++counts[y[r].index()];
  nodes_[id].counts = counts;
  if (is_pure(counts)) return id;

  const SplitScore parent{sum_squares(counts), static_cast<std::int64_t>(n)};
  SplitScore best = parent;
  bool found = false;
  std::size_t best_feature = 0;
  double best_threshold = 0.0;
  for (std::size_t f = 0; f < sorted.size(); ++f) {
    const auto& order = sorted[f];
    ClassCounts left{};
    ClassCounts right = counts;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const std::size_t label = y[order[k]].index();
      ++left[label];
      --right[label];
      const double v = x(order[k], f);
      const double next = x(order[k + 1], f);
      if (!(v < next)) continue;
      const SplitScore score = split_score(left, k + 1, right, n - k - 1);
      if (score > best) {
        best = score;
        found = true;
        best_feature = f;
        best_threshold = v + (next - v) / 2.0;
        if (!(best_threshold < next)) best_threshold = v;
      }
    }
  }
  if (!found) return id;

  std::vector<std::vector<std::size_t>> left_sorted(sorted.size());
  std::vector<std::vector<std::size_t>> right_sorted(sorted.size());
  for (std::size_t f = 0; f < sorted.size(); ++f) {
    for (std::size_t r : sorted[f]) {
      (x(r, best_feature) <= best_threshold ? left_sorted[f] : right_sorted[f]).push_back(r);
    }
  }
  sorted.clear();
  sorted.shrink_to_fit();

  const std::size_t left_id = grow(x, y, std::move(left_sorted));
  const std::size_t right_id = grow(x, y, std::move(right_sorted));
  auto& node = nodes_[id];
  node.leaf = false;
  node.feature = best_feature;
  node.threshold = best_threshold;
  node.left = left_id;
  node.right = right_id;
  return id;
}

std::size_t DecisionTreeModel::leaf_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const Node& n) { return n.leaf; }));
}

const DecisionTreeModel::Node& DecisionTreeModel::leaf_for(std::span<const double> x) const noexcept {
  const Node* node = &nodes_.front();
  while (!node->leaf) node = &nodes_[x[node->feature] <= node->threshold ? node->left : node->right];
  return *node;
}

PredictionOutcome DecisionTreeModel::do_predict(std::span<const double> x) const {
  const auto& leaf = leaf_for(x);
  const double n = static_cast<double>(std::accumulate(leaf.counts.begin(), leaf.counts.end(), std::size_t{0}));
  ClassScores scores{};
  for (std::size_t g = 0; g < Grade::kCount; ++g) scores[g] = static_cast<double>(leaf.counts[g]) / n;
  return PredictionOutcome::from_scores(scores);
}

}  // namespace gradepred
