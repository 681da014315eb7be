#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "gradepred/matrix.hpp"
#include "gradepred/models.hpp"

namespace gradepred {

using ClassCounts = std::array<std::size_t, Grade::kCount>;

// 1 - sum p_k^2
double gini_impurity(const ClassCounts& counts) noexcept;

// CART on Gini impurity: binary splits at midpoints between consecutive
// distinct values, grown until every leaf is pure or no split lowers the
// weighted impurity. Split ties go to the lower feature index, then the lower
// threshold. Impurity comparisons are exact (integer arithmetic).
class DecisionTreeModel final : public TrainedModel {
 public:
  struct Node {
    bool leaf = true;
    std::size_t feature = 0;
    double threshold = 0.0;  // x[feature] <= threshold goes left
    std::size_t left = 0;
    std::size_t right = 0;
    ClassCounts counts{};
  };

  DecisionTreeModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

  std::span<const Node> nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const noexcept;
  const Node& leaf_for(std::span<const double> x) const noexcept;

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  std::size_t grow(const Matrix& x, std::span<const Grade> y, std::vector<std::vector<std::size_t>> sorted);

  std::vector<Node> nodes_;
};

}  // namespace gradepred
