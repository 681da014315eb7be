#include "gradepred/selection.hpp"

#include <algorithm>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gradepred {

std::size_t SelectionMask::kept_count() const noexcept {
  return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

std::size_t SelectionMask::kept_count(std::span<const FeatureGroup> groups, FeatureGroup group) const noexcept {
  std::size_t n = 0;
  for (std::size_t c = 0; c < kept.size(); ++c) n += (kept[c] && groups[c] == group) ? 1 : 0;
  return n;
}

std::vector<std::size_t> SelectionMask::kept_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t c = 0; c < kept.size(); ++c) {
    if (kept[c]) out.push_back(c);
  }
  return out;
}

double column_variance(const Matrix& matrix, std::size_t column) {
  if (matrix.rows() == 0) throw std::invalid_argument("column_variance: empty matrix");
  const double n = static_cast<double>(matrix.rows());
  double mean = 0.0;
  for (std::size_t r = 0; r < matrix.rows(); ++r) mean += matrix(r, column);
  mean /= n;
  double sq = 0.0;
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    const double d = matrix(r, column) - mean;
    sq += d * d;
  }
  return sq / n;
}

SelectionMask apply_variance_threshold(const Matrix& values, std::span<const FeatureGroup> groups,
                                       Thresholds thresholds) {
  if (thresholds.perf < 0.0 || thresholds.subs < 0.0) throw std::invalid_argument("thresholds must be >= 0");
  if (groups.size() != values.cols()) throw std::invalid_argument("group tags do not match column count");
  SelectionMask mask{thresholds, std::vector<bool>(values.cols(), true)};
  for (std::size_t c = 0; c < values.cols(); ++c) {
    if (groups[c] == FeatureGroup::PerQuestionPerformance) {
      mask.kept[c] = column_variance(values, c) > thresholds.perf;
    } else if (groups[c] == FeatureGroup::SubmissionsPerQuestion) {
      mask.kept[c] = column_variance(values, c) > thresholds.subs;
    }
  }
  return mask;
}

SelectionMask apply_variance_threshold(const FeatureMatrix& matrix, Thresholds thresholds) {
  const auto groups = matrix.groups();
  return apply_variance_threshold(matrix.values, groups, thresholds);
}

FeatureMatrix apply_mask(const FeatureMatrix& matrix, const SelectionMask& mask) {
  if (mask.kept.size() != matrix.cols()) throw std::invalid_argument("mask does not match column count");
  const auto keep = mask.kept_indices();
  FeatureMatrix out;
  out.row_ids = matrix.row_ids;
  for (std::size_t c : keep) out.columns.push_back(matrix.columns[c]);
  out.values = matrix.values.select_columns(keep);
  return out;
}

MinMaxScaler::MinMaxScaler(const Matrix& fit_on) : min_(fit_on.cols()), max_(fit_on.cols()) {
  if (fit_on.rows() == 0) throw std::invalid_argument("MinMaxScaler: empty matrix");
  for (std::size_t c = 0; c < fit_on.cols(); ++c) {
    min_[c] = max_[c] = fit_on(0, c);
    for (std::size_t r = 1; r < fit_on.rows(); ++r) {
      min_[c] = std::min(min_[c], fit_on(r, c));
      max_[c] = std::max(max_[c], fit_on(r, c));
    }
  }
}

void MinMaxScaler::transform(std::span<double> row) const noexcept {
  for (std::size_t c = 0; c < row.size(); ++c) {
    const double range = max_[c] - min_[c];
    row[c] = range > 0.0 ? (row[c] - min_[c]) / range : 0.0;
  }
}

Matrix MinMaxScaler::transform(const Matrix& m) const {
  if (m.cols() != min_.size()) throw std::invalid_argument("MinMaxScaler: column count mismatch");
  Matrix out = m;
  for (std::size_t r = 0; r < out.rows(); ++r) transform(out.row(r));
  return out;
}

FeatureMatrix minmax_normalize(const FeatureMatrix& matrix, const SelectionMask& mask) {
  FeatureMatrix out = apply_mask(matrix, mask);
  if (out.rows() > 0) out.values = MinMaxScaler(out.values).transform(out.values);
  return out;
}

nlohmann::json mask_to_json(const FeatureMatrix& matrix, const SelectionMask& mask) {
  nlohmann::json kept = nlohmann::json::array();
  for (std::size_t c : mask.kept_indices()) kept.push_back(matrix.columns[c].name);
  return {{"t_perf", mask.thresholds.perf}, {"t_subs", mask.thresholds.subs}, {"kept", std::move(kept)}};
}

}  // namespace gradepred
