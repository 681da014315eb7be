#include "gradepred/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <ostream>
#include <sstream>

#include "csv.hpp"
#include "gradepred/parallel.hpp"
#include "gradepred/rng.hpp"

namespace gradepred {
namespace {

struct Prep {
  SelectionMask mask;
  std::optional<MinMaxScaler> scaler;
};

Prep fit_prep(const Matrix& train, std::span<const FeatureGroup> groups, const LooConfig& config) {
  Prep prep{apply_variance_threshold(train, groups, config.thresholds), std::nullopt};
  if (config.normalize) prep.scaler.emplace(train.select_columns(prep.mask.kept_indices()));
  return prep;
}

FoldPipeline fit_with_prep(const Matrix& values, std::span<const Grade> labels, std::span<const std::size_t> rows,
                           Prep prep, const LooConfig& config, std::uint64_t model_seed) {
  Matrix x = values.select_rows(rows).select_columns(prep.mask.kept_indices());
  if (prep.scaler) x = prep.scaler->transform(x);
  std::vector<Grade> y;
  y.reserve(rows.size());
  for (std::size_t r : rows) y.push_back(labels[r]);
  ModelSpec spec = config.model;
  spec.seed = model_seed;
  auto model = train(spec, x, y);
  return FoldPipeline(std::move(prep.mask), std::move(prep.scaler), std::move(model));
}

std::vector<std::size_t> all_but(std::size_t n, std::size_t held_out) {
  std::vector<std::size_t> rows;
  rows.reserve(n - 1);
  for (std::size_t r = 0; r < n; ++r) {
    if (r != held_out) rows.push_back(r);
  }
  return rows;
}

int predicted(const LooEntry& e) { return e.outcome.grade.value(); }
int actual(const LooEntry& e) { return e.true_grade.value(); }

void require_nonempty(const LooPredictions& preds) {
  if (preds.entries.empty()) throw std::invalid_argument("metrics need at least one prediction");
}

}  // namespace

PredictionOutcome FoldPipeline::predict(std::span<const double> raw_row) const {
  if (raw_row.size() != mask_.kept.size()) throw DimensionMismatch(mask_.kept.size(), raw_row.size());
  std::vector<double> x;
  x.reserve(raw_row.size());
  for (std::size_t c = 0; c < raw_row.size(); ++c) {
    if (mask_.kept[c]) x.push_back(raw_row[c]);
  }
  if (scaler_) scaler_->transform(x);
  return model_->predict(x);
}

std::uint64_t fold_seed(std::uint64_t master_seed, std::size_t fold) noexcept {
  return derive_key(master_seed, {0x4c4f4fULL, fold});
}

FoldPipeline fit_pipeline(const FeatureMatrix& features, std::span<const Grade> labels,
                          std::span<const std::size_t> train_rows, const LooConfig& config, std::uint64_t model_seed) {
  const auto groups = features.groups();
  Prep prep = fit_prep(features.values.select_rows(train_rows), groups, config);
  return fit_with_prep(features.values, labels, train_rows, std::move(prep), config, model_seed);
}

LooPredictions loocv(const FeatureMatrix& features, std::span<const Grade> labels, const LooConfig& config) {
  const std::size_t n = features.rows();
  if (n < 2) throw std::invalid_argument("leave-one-out needs at least 2 rows");
  if (labels.size() != n) throw std::invalid_argument("label count does not match row count");
  config.model.validate();

  const auto groups = features.groups();
  std::optional<Prep> global;
  if (config.global_prep) global = fit_prep(features.values, groups, config);

  LooPredictions out;
  out.row_ids = features.row_ids;
  out.entries.resize(n);
  std::atomic<std::size_t> nonconverged{0};
  parallel_for(n, config.threads, [&](std::size_t fold) {
    try {
      const auto rows = all_but(n, fold);
      Prep prep = global ? *global : fit_prep(features.values.select_rows(rows), groups, config);
      const auto pipeline =
          fit_with_prep(features.values, labels, rows, std::move(prep), config, fold_seed(config.model.seed, fold));
      if (!pipeline.model().converged()) ++nonconverged;
      if (config.fold_observer) config.fold_observer(fold, pipeline);
      out.entries[fold] = LooEntry{labels[fold], pipeline.predict(features.values.row(fold)), fold};
    } catch (const std::exception& e) {
      throw FoldError(fold, e.what());
    }
  });
  out.nonconverged_folds = nonconverged.load();
  return out;
}

std::vector<Grade> final_grades(const Dataset& dataset) {
  std::vector<Grade> y;
  for (const auto& s : dataset.students()) y.push_back(s.final_grade);
  return y;
}

LooPredictions loocv(const Dataset& dataset, const LooConfig& config) {
  const auto features = assemble_feature_matrix(dataset);
  const auto labels = final_grades(dataset);
  return loocv(features, labels, config);
}

double accuracy(const LooPredictions& preds) {
  require_nonempty(preds);
  std::size_t correct = 0;
  for (const auto& e : preds.entries) correct += predicted(e) == actual(e) ? 1 : 0;
  return static_cast<double>(correct) / static_cast<double>(preds.entries.size());
}

double mse(const LooPredictions& preds) {
  require_nonempty(preds);
  long long sum = 0;
  for (const auto& e : preds.entries) {
    const int d = predicted(e) - actual(e);
    sum += d * d;
  }
  return static_cast<double>(sum) / static_cast<double>(preds.entries.size());
}

double f1_micro(const LooPredictions& preds) {
  require_nonempty(preds);
  std::array<long long, Grade::kCount> tp{}, fp{}, fn{};
  for (const auto& e : preds.entries) {
    if (predicted(e) == actual(e)) {
      ++tp[e.true_grade.index()];
    } else {
      ++fp[e.outcome.grade.index()];
      ++fn[e.true_grade.index()];
    }
  }
  const long long tp_sum = std::accumulate(tp.begin(), tp.end(), 0LL);
  const long long fp_sum = std::accumulate(fp.begin(), fp.end(), 0LL);
  const long long fn_sum = std::accumulate(fn.begin(), fn.end(), 0LL);
  const long long denom = 2 * tp_sum + fp_sum + fn_sum;
  return denom == 0 ? 0.0 : static_cast<double>(2 * tp_sum) / static_cast<double>(denom);
}

DistanceHistogram distance_histogram(const LooPredictions& preds) {
  require_nonempty(preds);
  DistanceHistogram h{};
  for (const auto& e : preds.entries) ++h[static_cast<std::size_t>(std::abs(predicted(e) - actual(e)))];
  return h;
}

double micro_average_precision(const LooPredictions& preds) {
  require_nonempty(preds);
  struct Item {
    double score;
    std::size_t student;
    std::size_t cls;
    bool positive;
  };
  std::vector<Item> items;
  items.reserve(preds.entries.size() * Grade::kCount);
  for (std::size_t i = 0; i < preds.entries.size(); ++i) {
    const auto& e = preds.entries[i];
    for (std::size_t c = 0; c < Grade::kCount; ++c) {
      items.push_back({e.outcome.class_scores[c], i, c, c == e.true_grade.index()});
    }
  }
  std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.student != b.student) return a.student < b.student;
    return a.cls < b.cls;
  });
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t rank = 0; rank < items.size(); ++rank) {
    if (!items[rank].positive) continue;
    ++hits;
    sum += static_cast<double>(hits) / static_cast<double>(rank + 1);
  }
  return sum / static_cast<double>(preds.entries.size());
}

AurocResult auroc_correct(const LooPredictions& preds) {
  require_nonempty(preds);
  const std::size_t n = preds.entries.size();
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& s = preds.entries[i].outcome.class_scores;
    score[i] = *std::max_element(s.begin(), s.end());
  }
  const auto [lo, hi] = std::minmax_element(score.begin(), score.end());
  const double min = *lo;
  const double range = *hi - *lo;
  for (double& s : score) s = range > 0.0 ? (s - min) / range : 0.0;

  std::size_t positives = 0;
  for (const auto& e : preds.entries) positives += predicted(e) == actual(e) ? 1 : 0;
  const std::size_t negatives = n - positives;
  if (positives == 0 || negatives == 0) return {0.5, true};

  // Mann-Whitney U from mid-ranks.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
  double rank_sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && score[order[j]] == score[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      const auto& e = preds.entries[order[k]];
      if (predicted(e) == actual(e)) rank_sum += mid_rank;
    }
    i = j;
  }
  const double p = static_cast<double>(positives);
  const double q = static_cast<double>(negatives);
  return {(rank_sum - p * (p + 1.0) / 2.0) / (p * q), false};
}

EvalReport evaluate(const LooPredictions& preds) {
  EvalReport r;
  r.n = preds.entries.size();
  r.accuracy = accuracy(preds);
  r.mse = mse(preds);
  r.f1_micro = f1_micro(preds);
  r.micro_ap = micro_average_precision(preds);
  const auto auc = auroc_correct(preds);
  r.auroc = auc.value;
  r.auroc_degenerate = auc.degenerate;
  r.distance_histogram = distance_histogram(preds);

  const auto n = static_cast<double>(r.n);
  const std::size_t total = std::accumulate(r.distance_histogram.begin(), r.distance_histogram.end(), std::size_t{0});
  long long weighted = 0;
  for (std::size_t d = 0; d < Grade::kCount; ++d) {
    weighted += static_cast<long long>(d * d) * static_cast<long long>(r.distance_histogram[d]);
  }
  if (total != r.n) throw std::logic_error("distance histogram does not sum to N");
  if (r.f1_micro != r.accuracy) throw std::logic_error("micro f1 differs from accuracy");
  if (r.accuracy != static_cast<double>(r.distance_histogram[0]) / n) {
    throw std::logic_error("accuracy differs from histogram[0] / N");
  }
  if (r.mse != static_cast<double>(weighted) / n) throw std::logic_error("mse differs from histogram moment");
  return r;
}

std::string format_percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f%%", 100.0 * fraction);
  return buf;
}

std::string render_report(std::span<const std::pair<ModelSpec, EvalReport>> reports, const std::string& title) {
  std::vector<const std::pair<ModelSpec, EvalReport>*> rows;
  for (const auto& r : reports) rows.push_back(&r);
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto* a, const auto* b) { return report_order(a->first) < report_order(b->first); });

  const auto fixed3 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return std::string(buf);
  };

  std::ostringstream out;
  out << "## " << title << "\n\n";
  out << "| Model | Accuracy | Mean Square Error | Average Precision (Micro) | AUROC | f1 score |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto* r : rows) {
    const auto& m = r->second;
    out << "| " << display_name(r->first) << " | " << format_percent(m.accuracy) << " | " << fixed3(m.mse) << " | "
        << fixed3(m.micro_ap) << " | " << fixed3(m.auroc) << " | " << fixed3(m.f1_micro) << " |\n";
  }
  out << "\n## Distance between predicted and actual grade\n\n";
  out << "| Model | 0 | 1 | 2 | 3 | 4 |\n";
  out << "|---|---|---|---|---|---|\n";
  for (const auto* r : rows) {
    out << "| " << display_name(r->first);
    for (std::size_t count : r->second.distance_histogram) out << " | " << count;
    out << " |\n";
  }
  return out.str();
}

void write_predictions_csv(std::ostream& out, const LooPredictions& preds) {
  out << "student_id,true_grade,predicted_grade,score_F,score_D,score_C,score_B,score_A\n";
  for (std::size_t i = 0; i < preds.entries.size(); ++i) {
    const auto& e = preds.entries[i];
    out << preds.row_ids[i] << ',' << e.true_grade.letter() << ',' << e.outcome.grade.letter();
    for (double s : e.outcome.class_scores) out << ',' << csv::format_double(s);
    out << '\n';
  }
}

}  // namespace gradepred
