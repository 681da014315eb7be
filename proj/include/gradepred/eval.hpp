#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "gradepred/dataset.hpp"
#include "gradepred/features.hpp"
#include "gradepred/models.hpp"
#include "gradepred/selection.hpp"

namespace gradepred {

class FoldPipeline;

struct LooConfig {
  ModelSpec model;
  Thresholds thresholds;
  bool normalize = false;
  // Fit selection and normalization once on all rows instead of per fold.
  bool global_prep = false;
  unsigned threads = 1;  // 0 = hardware concurrency
  // Called once per fold with the fitted pipeline, possibly from several
  // threads at once. Lets diagnostics probe a fold's model.
  std::function<void(std::size_t fold, const FoldPipeline&)> fold_observer;
};

// Error raised while training or predicting one fold.
class FoldError : public std::runtime_error {
 public:
  FoldError(std::size_t fold, const std::string& what)
      : std::runtime_error("fold " + std::to_string(fold) + ": " + what), fold_(fold) {}
  std::size_t fold() const noexcept { return fold_; }

 private:
  std::size_t fold_;
};

struct LooEntry {
  Grade true_grade;
  PredictionOutcome outcome;
  std::size_t fold_index = 0;

  bool operator==(const LooEntry&) const = default;
};

struct LooPredictions {
  std::vector<std::string> row_ids;
  std::vector<LooEntry> entries;  // one per row, entries[i].fold_index == i
  std::size_t nonconverged_folds = 0;

  bool operator==(const LooPredictions&) const = default;
};

// Selection mask, optional scaler and model fitted on one fold's training rows.
class FoldPipeline {
 public:
  FoldPipeline(SelectionMask mask, std::optional<MinMaxScaler> scaler, std::unique_ptr<TrainedModel> model)
      : mask_(std::move(mask)), scaler_(std::move(scaler)), model_(std::move(model)) {}

  // raw_row is a full, unselected feature row.
  PredictionOutcome predict(std::span<const double> raw_row) const;

  const SelectionMask& mask() const noexcept { return mask_; }
  const TrainedModel& model() const noexcept { return *model_; }

 private:
  SelectionMask mask_;
  std::optional<MinMaxScaler> scaler_;
  std::unique_ptr<TrainedModel> model_;
};

// Model seed used for one fold: mixes the master seed with the fold index.
std::uint64_t fold_seed(std::uint64_t master_seed, std::size_t fold) noexcept;

// Fits selection (+ normalization) statistics and the model on train_rows.
FoldPipeline fit_pipeline(const FeatureMatrix& features, std::span<const Grade> labels,
                          std::span<const std::size_t> train_rows, const LooConfig& config, std::uint64_t model_seed);

LooPredictions loocv(const FeatureMatrix& features, std::span<const Grade> labels, const LooConfig& config);
LooPredictions loocv(const Dataset& dataset, const LooConfig& config);

std::vector<Grade> final_grades(const Dataset& dataset);

using DistanceHistogram = std::array<std::size_t, Grade::kCount>;

double accuracy(const LooPredictions& preds);
double mse(const LooPredictions& preds);
// Micro-averaged F1 over the five classes from pooled TP/FP/FN counts.
double f1_micro(const LooPredictions& preds);
DistanceHistogram distance_histogram(const LooPredictions& preds);
// Average precision of the pooled 5N (student, class) one-vs-rest ranking.
// Score ties are ordered by (student index, class index).
double micro_average_precision(const LooPredictions& preds);

struct AurocResult {
  double value = 0.5;
  bool degenerate = false;  // all predictions correct, or all wrong
};
// Correct vs incorrect, ranked by each student's (rescaled) top class score.
AurocResult auroc_correct(const LooPredictions& preds);

struct EvalReport {
  double accuracy = 0.0;
  double mse = 0.0;
  double micro_ap = 0.0;
  double auroc = 0.5;
  double f1_micro = 0.0;
  DistanceHistogram distance_histogram{};
  bool auroc_degenerate = false;
  std::size_t n = 0;
};

// Computes every metric and checks the identities f1 == accuracy,
// accuracy == hist[0]/N, mse == sum d^2 hist[d] / N, sum(hist) == N.
// Throws std::logic_error if any identity fails.
EvalReport evaluate(const LooPredictions& preds);

// Percentage rendering used in reports, e.g. 47.8%.
std::string format_percent(double fraction);

// Markdown metric table followed by a distance table, rows in the canonical
// model order.
std::string render_report(std::span<const std::pair<ModelSpec, EvalReport>> reports,
                          const std::string& title = "Performance");

// student_id,true_grade,predicted_grade,score_F,score_D,score_C,score_B,score_A
void write_predictions_csv(std::ostream& out, const LooPredictions& preds);

}  // namespace gradepred
