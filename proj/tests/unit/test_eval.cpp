#include <doctest.h>

#include <random>
#include <sstream>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "gradepred/eval.hpp"
#include "gradepred/sweep.hpp"

using namespace gradepred;

namespace {

LooEntry entry(int truth, int predicted, std::size_t fold) {
  ClassScores s{};
  s[static_cast<std::size_t>(predicted - 1)] = 1.0;
  return {Grade(truth), {Grade(predicted), s}, fold};
}

LooPredictions all_a_cohort() {
  LooPredictions p;
  const std::array<std::pair<int, int>, 5> counts{{{5, 119}, {4, 72}, {3, 22}, {2, 10}, {1, 26}}};
  for (const auto& [grade, count] : counts) {
    for (int i = 0; i < count; ++i) {
      p.row_ids.push_back("s" + std::to_string(p.entries.size()));
      p.entries.push_back(entry(grade, 5, p.entries.size()));
    }
  }
  return p;
}

FeatureMatrix tagged(const Matrix& values, const std::vector<FeatureGroup>& groups) {
  FeatureMatrix fm;
  fm.values = values;
  for (std::size_t r = 0; r < values.rows(); ++r) fm.row_ids.push_back("s" + std::to_string(r));
  for (std::size_t c = 0; c < groups.size(); ++c) fm.columns.push_back({"c" + std::to_string(c), groups[c]});
  return fm;
}

}  // namespace

TEST_SUITE("eval") {
  TEST_CASE("all-A predictor metrics") {
    const auto p = all_a_cohort();
    CHECK(accuracy(p) == 119.0 / 249.0);
    CHECK(mse(p) == 666.0 / 249.0);
    CHECK(f1_micro(p) == accuracy(p));
    CHECK(distance_histogram(p) == DistanceHistogram{119, 72, 22, 10, 26});
    CHECK(format_percent(accuracy(p)) == "47.8%");
  }

  TEST_CASE("perfect predictions") {
    LooPredictions p;
    for (int i = 0; i < 10; ++i) p.entries.push_back(entry(1 + i % 5, 1 + i % 5, static_cast<std::size_t>(i)));
    const auto r = evaluate(p);
    CHECK(r.accuracy == 1.0);
    CHECK(r.mse == 0.0);
    CHECK(r.f1_micro == 1.0);
    CHECK(r.micro_ap == 1.0);
    CHECK(r.distance_histogram == DistanceHistogram{10, 0, 0, 0, 0});
    CHECK(r.auroc_degenerate);
    CHECK(r.auroc == 0.5);
    LooPredictions bad;
    bad.entries.push_back(entry(5, 1, 0));
    CHECK(distance_histogram(bad)[4] == 1);
  }

  TEST_CASE("auroc matches pair counting") {
    // Positives scored 0.9 and 0.8, one negative at 0.85.
    LooPredictions p;
    for (auto [truth, score] : {std::pair{5, 0.9}, std::pair{5, 0.8}, std::pair{4, 0.85}}) {
      ClassScores s{};
      s[4] = score;
      p.entries.push_back({Grade(truth), {Grade(5), s}, p.entries.size()});
    }
    const std::vector<double> pos{0.9, 0.8}, neg{0.85};
    CHECK(oracle::auroc_by_pairs(pos, neg) == 0.5);
    CHECK(auroc_correct(p).value == doctest::Approx(0.5));
    CHECK_FALSE(auroc_correct(p).degenerate);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 200; ++trial) {
      LooPredictions q;
      const auto n = 2 + static_cast<std::size_t>(rng() % 30);
      for (std::size_t i = 0; i < n; ++i) {
        ClassScores s{};
        for (double& v : s) v = std::round(u(rng) * 4.0) / 4.0;  // coarse values force ties
        const auto out = PredictionOutcome::from_scores(s);
        const Grade truth = rng() % 2 ? out.grade : Grade(1 + static_cast<int>(rng() % 5));
        q.entries.push_back({truth, out, i});
      }
      std::vector<double> maxes;
      for (const auto& e : q.entries) maxes.push_back(*std::max_element(e.outcome.class_scores.begin(), e.outcome.class_scores.end()));
      const double lo = *std::min_element(maxes.begin(), maxes.end());
      const double hi = *std::max_element(maxes.begin(), maxes.end());
      std::vector<double> ps, ns;
      for (std::size_t i = 0; i < n; ++i) {
        const double scaled = hi > lo ? (maxes[i] - lo) / (hi - lo) : 0.0;
        (q.entries[i].outcome.grade == q.entries[i].true_grade ? ps : ns).push_back(scaled);
      }
      const auto got = auroc_correct(q);
      if (ps.empty() || ns.empty()) {
        CHECK(got.degenerate);
        CHECK(got.value == 0.5);
      } else {
        CHECK(got.value == doctest::Approx(oracle::auroc_by_pairs(ps, ns)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("micro average precision matches a naive ranking") {
    // Two students (A, B) with their true classes ranked first: AP 1.
    LooPredictions two;
    ClassScores s1{0.0, 0.0, 0.0, 0.1, 0.9}, s2{0.0, 0.0, 0.0, 0.8, 0.05};
    two.entries.push_back({Grade(5), PredictionOutcome::from_scores(s1), 0});
    two.entries.push_back({Grade(4), PredictionOutcome::from_scores(s2), 1});
    CHECK(micro_average_precision(two) == 1.0);

    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 200; ++trial) {
      LooPredictions q;
      std::vector<std::pair<bool, double>> items;
      const auto n = 1 + static_cast<std::size_t>(rng() % 12);
      for (std::size_t i = 0; i < n; ++i) {
        ClassScores s{};
        for (double& v : s) v = static_cast<double>(rng() % 4);
        const Grade truth(1 + static_cast<int>(rng() % 5));
        q.entries.push_back({truth, PredictionOutcome::from_scores(s), i});
        for (std::size_t g = 0; g < 5; ++g) items.emplace_back(g == truth.index(), s[g]);
      }
      CHECK(micro_average_precision(q) == doctest::Approx(oracle::average_precision(items)).epsilon(1e-12));
    }
  }

  TEST_CASE("two-student majority folds predict the other grade") {
    const auto fm = tagged(Matrix(2, 1), {FeatureGroup::Scores});
    const std::vector<Grade> y{Grade(2), Grade(5)};
    LooConfig cfg;
    cfg.model.kind = ModelKind::MajorityBaseline;
    const auto p = loocv(fm, y, cfg);
    CHECK(p.entries[0].outcome.grade == Grade(5));
    CHECK(p.entries[1].outcome.grade == Grade(2));
  }

  TEST_CASE("per-fold selection drops a column that only varies on the held-out row") {
    Matrix values(5, 2, 0.0);
    values(2, 0) = 1.0;
    for (std::size_t r = 0; r < 5; ++r) values(r, 1) = static_cast<double>(r);
    const auto fm = tagged(values, {FeatureGroup::PerQuestionPerformance, FeatureGroup::Scores});
    const auto y = std::vector<Grade>{Grade(1), Grade(2), Grade(3), Grade(4), Grade(5)};
    LooConfig cfg;
    cfg.model.kind = ModelKind::Knn;
    cfg.thresholds = {0.0, 0.0};
    std::vector<std::vector<bool>> kept(5);
    cfg.fold_observer = [&](std::size_t fold, const FoldPipeline& p) { kept[fold] = p.mask().kept; };
    loocv(fm, y, cfg);
    CHECK(kept[2] == std::vector<bool>{false, true});
    CHECK(kept[0] == std::vector<bool>{true, true});
    cfg.global_prep = true;
    loocv(fm, y, cfg);
    CHECK(kept[2] == std::vector<bool>{true, true});
  }

  TEST_CASE("threads do not change results") {
    std::mt19937_64 rng(12);
    const auto fm = tagged(fixtures::random_matrix(rng, 30, 4),
                           {FeatureGroup::PerQuestionPerformance, FeatureGroup::SubmissionsPerQuestion,
                            FeatureGroup::Scores, FeatureGroup::Scores});
    const auto y = fixtures::random_grades(rng, 30);
    for (const char* name : {"svm", "knn", "random", "tree"}) {
      LooConfig cfg;
      cfg.model = model_spec_from_name(name);
      cfg.model.seed = 99;
      cfg.normalize = true;
      const auto one = loocv(fm, y, cfg);
      cfg.threads = 4;
      CHECK(loocv(fm, y, cfg) == one);
    }
  }

  TEST_CASE("report rendering") {
    const auto p = all_a_cohort();
    std::vector<std::pair<ModelSpec, EvalReport>> reports{{model_spec_from_name("majority"), evaluate(p)},
                                                          {model_spec_from_name("svm"), evaluate(p)}};
    const auto text = render_report(reports, "T");
    CHECK(text.find("| All A | 47.8% | 2.675 |") != std::string::npos);
    CHECK(text.find("| SVM |") < text.find("| All A |"));
    CHECK(text.find("| 119 | 72 | 22 | 10 | 26 |") != std::string::npos);

    std::ostringstream csv;
    write_predictions_csv(csv, p);
    CHECK(csv.str().rfind("student_id,true_grade,predicted_grade", 0) == 0);
  }

  TEST_CASE("sweep picks the smallest pair on ties") {
    const auto fm = tagged(Matrix(6, 2, 1.0), {FeatureGroup::PerQuestionPerformance, FeatureGroup::Scores});
    const std::vector<Grade> y{Grade(5), Grade(5), Grade(5), Grade(5), Grade(4), Grade(5)};
    LooConfig cfg;
    cfg.model.kind = ModelKind::MajorityBaseline;
    const auto result = threshold_sweep(fm, y, cfg);
    CHECK(result.entries.size() == 4);
    CHECK(result.winner == Thresholds{0.0, 0.0});
    const auto table = render_sweep(result, cfg.model);
    CHECK(std::count(table.begin(), table.end(), '*') == 1);
  }
}
