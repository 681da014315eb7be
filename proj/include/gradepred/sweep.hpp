#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "gradepred/eval.hpp"
#include "gradepred/selection.hpp"

namespace gradepred {

struct SweepEntry {
  Thresholds thresholds;
  double accuracy = 0.0;
  // Question-block columns kept when the mask is fitted on every row.
  std::size_t kept_perf = 0;
  std::size_t kept_subs = 0;
};

struct ThresholdSweepResult {
  std::vector<SweepEntry> entries;  // kSweepThresholds order
  Thresholds winner;
};

// Full leave-one-out run per threshold combination; the winner maximizes
// accuracy, ties going to the lexicographically smaller pair. Fold errors are
// rethrown as ModelError naming the combination.
ThresholdSweepResult threshold_sweep(const FeatureMatrix& features, std::span<const Grade> labels,
                                     const LooConfig& base);
ThresholdSweepResult threshold_sweep(const Dataset& dataset, const LooConfig& base);

// Four-row table; the winning row is marked with '*'.
std::string render_sweep(const ThresholdSweepResult& result, const ModelSpec& model);

}  // namespace gradepred
