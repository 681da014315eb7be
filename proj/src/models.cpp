#include "gradepred/models.hpp"

#include <algorithm>
#include <cmath>

#include "gradepred/baselines.hpp"
#include "gradepred/decision_tree.hpp"
#include "gradepred/knn.hpp"
#include "gradepred/naive_bayes.hpp"
#include "gradepred/regression.hpp"
#include "gradepred/svm.hpp"

namespace gradepred {

// Only the hyperparameters the kind actually uses are checked.
void ModelSpec::validate() const {
  const bool svr = kind == ModelKind::RegressionToGrade && regression_backend == RegressionBackend::EpsilonSvr;
  if ((kind == ModelKind::SvmRbf || svr) && !(C > 0.0)) throw std::invalid_argument("C must be > 0");
  if (kind == ModelKind::Knn && k < 1) throw std::invalid_argument("k must be >= 1");
  if (svr && !(epsilon >= 0.0)) throw std::invalid_argument("epsilon must be >= 0");
}

ModelSpec model_spec_from_name(std::string_view name) {
  ModelSpec spec;
  if (name == "svm") {
    spec.kind = ModelKind::SvmRbf;
  } else if (name == "linreg") {
    spec.kind = ModelKind::RegressionToGrade;
  } else if (name == "svr") {
    spec.kind = ModelKind::RegressionToGrade;
    spec.regression_backend = RegressionBackend::EpsilonSvr;
  } else if (name == "tree") {
    spec.kind = ModelKind::DecisionTree;
  } else if (name == "nb") {
    spec.kind = ModelKind::NaiveBayes;
  } else if (name == "knn") {
    spec.kind = ModelKind::Knn;
  } else if (name == "random") {
    spec.kind = ModelKind::RandomBaseline;
  } else if (name == "majority") {
    spec.kind = ModelKind::MajorityBaseline;
  } else {
    throw std::invalid_argument("unknown model '" + std::string(name) + "'");
  }
  return spec;
}

std::string_view cli_name(const ModelSpec& spec) noexcept {
  switch (spec.kind) {
    case ModelKind::SvmRbf: return "svm";
    case ModelKind::RegressionToGrade:
      return spec.regression_backend == RegressionBackend::LeastSquares ? "linreg" : "svr";
    case ModelKind::DecisionTree: return "tree";
    case ModelKind::NaiveBayes: return "nb";
    case ModelKind::Knn: return "knn";
    case ModelKind::RandomBaseline: return "random";
    case ModelKind::MajorityBaseline: return "majority";
  }
  return "?";
}

std::string_view display_name(const ModelSpec& spec) noexcept {
  switch (spec.kind) {
    case ModelKind::SvmRbf: return "SVM";
    case ModelKind::RegressionToGrade:
      return spec.regression_backend == RegressionBackend::LeastSquares ? "Lin. Reg" : "SVR";
    case ModelKind::DecisionTree: return "Decision Tree";
    case ModelKind::NaiveBayes: return "Naive Bayes";
    case ModelKind::Knn: return "KNN";
    case ModelKind::RandomBaseline: return "Random";
    case ModelKind::MajorityBaseline: return "All A";
  }
  return "?";
}

int report_order(const ModelSpec& spec) noexcept {
  switch (spec.kind) {
    case ModelKind::SvmRbf: return 0;
    case ModelKind::RegressionToGrade: return spec.regression_backend == RegressionBackend::LeastSquares ? 1 : 2;
    case ModelKind::DecisionTree: return 3;
    case ModelKind::NaiveBayes: return 4;
    case ModelKind::Knn: return 5;
    case ModelKind::RandomBaseline: return 6;
    case ModelKind::MajorityBaseline: return 7;
  }
  return 8;
}

PredictionOutcome PredictionOutcome::from_scores(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < Grade::kCount; ++k) {
    if (scores[k] > scores[best]) best = k;
  }
  return {Grade::from_index(best), scores};
}

void prefer_on_tie(ClassScores& scores, Grade preferred) noexcept {
  const double top = *std::max_element(scores.begin(), scores.end());
  double& s = scores[preferred.index()];
  if (s != top) return;
  const bool tied = std::count(scores.begin(), scores.end(), top) > 1;
  if (tied) s += 1e-9 * std::max(1.0, std::abs(s));
}

namespace detail {

void check_training_set(const Matrix& x, std::span<const Grade> y, std::size_t min_rows) {
  if (x.rows() != y.size()) throw ModelError("label count does not match row count");
  if (x.rows() < min_rows) throw ModelError("training set needs at least " + std::to_string(min_rows) + " rows");
  if (x.cols() == 0) throw ModelError("training set has no columns");
}

}  // namespace detail

std::unique_ptr<TrainedModel> train(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y) {
  spec.validate();
  // Row minimums are per model: baselines and the lazy learners accept one row.
  switch (spec.kind) {
    case ModelKind::SvmRbf: return std::make_unique<SvmRbfModel>(spec, x, y);
    case ModelKind::RegressionToGrade:
      if (spec.regression_backend == RegressionBackend::LeastSquares) {
        return std::make_unique<LeastSquaresModel>(spec, x, y);
      }
      return std::make_unique<EpsilonSvrModel>(spec, x, y);
    case ModelKind::DecisionTree: return std::make_unique<DecisionTreeModel>(spec, x, y);
    case ModelKind::NaiveBayes: return std::make_unique<NaiveBayesModel>(spec, x, y);
    case ModelKind::Knn: return std::make_unique<KnnModel>(spec, x, y);
    case ModelKind::RandomBaseline: return std::make_unique<RandomBaselineModel>(spec, x, y);
    case ModelKind::MajorityBaseline: return std::make_unique<MajorityBaselineModel>(spec, x, y);
  }
  throw ModelError("unknown model kind");
}

}  // namespace gradepred
