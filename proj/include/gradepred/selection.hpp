#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "gradepred/features.hpp"
#include "gradepred/matrix.hpp"

namespace gradepred {

// Variance cutoffs for the two per-question blocks.
struct Thresholds {
  double perf = 0.02;
  double subs = 0.05;

  auto operator<=>(const Thresholds&) const = default;
};

// The four combinations swept, in ascending lexicographic order.
inline constexpr std::array<Thresholds, 4> kSweepThresholds{
    Thresholds{0.00, 0.00}, Thresholds{0.02, 0.05}, Thresholds{0.03, 0.07}, Thresholds{0.04, 0.10}};

struct SelectionMask {
  Thresholds thresholds;
  std::vector<bool> kept;

  std::size_t kept_count() const noexcept;
  std::size_t kept_count(std::span<const FeatureGroup> groups, FeatureGroup group) const noexcept;
  std::vector<std::size_t> kept_indices() const;
};

// Population variance of one column.
double column_variance(const Matrix& matrix, std::size_t column);

// Question-block columns survive iff variance > threshold (strict); all other
// columns always survive.
SelectionMask apply_variance_threshold(const Matrix& values, std::span<const FeatureGroup> groups,
                                       Thresholds thresholds);
SelectionMask apply_variance_threshold(const FeatureMatrix& matrix, Thresholds thresholds);

FeatureMatrix apply_mask(const FeatureMatrix& matrix, const SelectionMask& mask);

// Per-column min-max statistics fitted on one matrix and applied to others.
class MinMaxScaler {
 public:
  MinMaxScaler() = default;
  explicit MinMaxScaler(const Matrix& fit_on);

  // Constant columns map to 0.
  void transform(std::span<double> row) const noexcept;
  Matrix transform(const Matrix& m) const;

  std::span<const double> mins() const noexcept { return min_; }
  std::span<const double> maxs() const noexcept { return max_; }

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

// Applies the mask, then rescales every kept column to [0,1].
FeatureMatrix minmax_normalize(const FeatureMatrix& matrix, const SelectionMask& mask);

// {"t_perf": .., "t_subs": .., "kept": [column names]}
nlohmann::json mask_to_json(const FeatureMatrix& matrix, const SelectionMask& mask);

}  // namespace gradepred
