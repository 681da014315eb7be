#include "gradepred/sweep.hpp"

#include <cstdio>
#include <sstream>

namespace gradepred {
namespace {

std::string format_pair(const Thresholds& t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "(%.2f, %.2f)", t.perf, t.subs);
  return buf;
}

}  // namespace

ThresholdSweepResult threshold_sweep(const FeatureMatrix& features, std::span<const Grade> labels,
                                     const LooConfig& base) {
  ThresholdSweepResult result;
  const auto groups = features.groups();
  double best = -1.0;
  for (const auto& t : kSweepThresholds) {
    LooConfig config = base;
    config.thresholds = t;
    LooPredictions preds;
    try {
      preds = loocv(features, labels, config);
    } catch (const std::exception& e) {
      throw ModelError("thresholds " + format_pair(t) + ": " + e.what());
    }
    const auto mask = apply_variance_threshold(features.values, groups, t);
    SweepEntry entry{t, accuracy(preds), mask.kept_count(groups, FeatureGroup::PerQuestionPerformance),
                     mask.kept_count(groups, FeatureGroup::SubmissionsPerQuestion)};
    if (entry.accuracy > best) {
      best = entry.accuracy;
      result.winner = t;
    }
    result.entries.push_back(entry);
  }
  return result;
}

ThresholdSweepResult threshold_sweep(const Dataset& dataset, const LooConfig& base) {
  const auto features = assemble_feature_matrix(dataset);
  const auto labels = final_grades(dataset);
  return threshold_sweep(features, labels, base);
}

std::string render_sweep(const ThresholdSweepResult& result, const ModelSpec& model) {
  std::ostringstream out;
  out << "## Variance threshold sweep (" << display_name(model) << ")\n\n";
  out << "| | (t_perf, t_subs) | Accuracy | perf kept | subs kept |\n";
  out << "|---|---|---|---|---|\n";
  for (const auto& e : result.entries) {
    out << "| " << (e.thresholds == result.winner ? "*" : " ") << " | " << format_pair(e.thresholds) << " | "
        << format_percent(e.accuracy) << " | " << e.kept_perf << " | " << e.kept_subs << " |\n";
  }
  return out.str();
}

}  // namespace gradepred
