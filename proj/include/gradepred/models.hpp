#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gradepred/grade.hpp"
#include "gradepred/matrix.hpp"

namespace gradepred {

enum class ModelKind { SvmRbf, RegressionToGrade, DecisionTree, NaiveBayes, Knn, RandomBaseline, MajorityBaseline };
enum class RegressionBackend { LeastSquares, EpsilonSvr };

struct ModelSpec {
  ModelKind kind = ModelKind::SvmRbf;
  double C = 1.0;
  int k = 5;
  RegressionBackend regression_backend = RegressionBackend::LeastSquares;
  double epsilon = 0.1;
  std::uint64_t seed = 0;

  void validate() const;  // throws std::invalid_argument
  bool operator==(const ModelSpec&) const = default;
};

// CLI names: svm linreg svr tree nb knn random majority.
ModelSpec model_spec_from_name(std::string_view name);
std::string_view cli_name(const ModelSpec& spec) noexcept;
// Row label used in rendered reports ("SVM", "Lin. Reg", ...).
std::string_view display_name(const ModelSpec& spec) noexcept;
// Rank of a model in report tables.
int report_order(const ModelSpec& spec) noexcept;

class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public ModelError {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : ModelError("expected " + std::to_string(expected) + " features, got " + std::to_string(got)) {}
};

struct PredictionOutcome {
  Grade grade;
  ClassScores class_scores{};

  // grade = argmax, ties to the lower grade.
  static PredictionOutcome from_scores(const ClassScores& scores);
  bool operator==(const PredictionOutcome&) const = default;
};

// Nudges scores[preferred] up when it ties the maximum so that the
// lower-grade argmax rule selects it. No-op otherwise.
void prefer_on_tie(ClassScores& scores, Grade preferred) noexcept;

class TrainedModel {
 public:
  virtual ~TrainedModel() = default;

  const ModelSpec& spec() const noexcept { return spec_; }
  std::size_t input_dim() const noexcept { return input_dim_; }
  // False when an iterative solver hit its iteration cap.
  bool converged() const noexcept { return converged_; }

  PredictionOutcome predict(std::span<const double> x) const {
    if (x.size() != input_dim_) throw DimensionMismatch(input_dim_, x.size());
    return do_predict(x);
  }

 protected:
  TrainedModel(ModelSpec spec, std::size_t input_dim) : spec_(spec), input_dim_(input_dim) {}
  virtual PredictionOutcome do_predict(std::span<const double> x) const = 0;

  bool converged_ = true;

 private:
  ModelSpec spec_;
  std::size_t input_dim_;
};

// Requires >= 2 rows and >= 1 column.
std::unique_ptr<TrainedModel> train(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y);

inline PredictionOutcome predict(const TrainedModel& model, std::span<const double> x) { return model.predict(x); }

namespace detail {
void check_training_set(const Matrix& x, std::span<const Grade> y, std::size_t min_rows);
}  // namespace detail

}  // namespace gradepred
