#include "gradepred/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <tuple>

#include "gradepred/features.hpp"
#include "gradepred/ingest.hpp"
#include "gradepred/rng.hpp"

namespace gradepred {
namespace {

constexpr std::int64_t kCourseStart = 1357027200;  // 2013-01-01T00:00:00Z
constexpr std::int64_t kDay = 86400;
constexpr std::int64_t kAssignmentSpacing = 10 * kDay;
constexpr std::int64_t kMinSessionSeparation = 3 * 3600;
constexpr double kMedianGapSeconds = 45.0;
constexpr double kGapLogSpread = 1.0;

enum Stream : std::uint64_t { kStudentStream = 1, kQuestionStream = 2, kAssignmentStream = 3, kTestStream = 4 };

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

std::string padded(char prefix, std::size_t index, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(3, std::to_string(count).size());
  std::string digits = std::to_string(index + 1);
  return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

}  // namespace

void CohortConfig::validate() const {
  if (n_students == 0) throw InfeasibleConfig("n_students must be positive");
  if (n_questions == 0) throw InfeasibleConfig("n_questions must be positive");
  if (!(boolean_question_fraction >= 0.0 && boolean_question_fraction <= 1.0)) {
    throw InfeasibleConfig("boolean_question_fraction must be in [0,1]");
  }
  if (ability_spread < 0.0 || difficulty_spread < 0.0 || test_noise < 0.0) {
    throw InfeasibleConfig("spreads must be >= 0");
  }
  long long total = 0;
  for (int c : target_grade_counts) {
    if (c < 0) throw InfeasibleConfig("grade counts must be >= 0");
    total += c;
  }
  if (total != static_cast<long long>(n_students)) {
    throw InfeasibleConfig("target grade counts sum to " + std::to_string(total) + ", expected " +
                           std::to_string(n_students));
  }
}

std::array<int, Grade::kCount> scaled_grade_counts(std::size_t n_students) {
  const int reference_total = std::accumulate(kReferenceGradeCounts.begin(), kReferenceGradeCounts.end(), 0);
  std::array<int, Grade::kCount> counts{};
  std::array<double, Grade::kCount> remainder{};
  int assigned = 0;
  for (std::size_t g = 0; g < Grade::kCount; ++g) {
    const double exact = static_cast<double>(kReferenceGradeCounts[g]) * static_cast<double>(n_students) /
                         static_cast<double>(reference_total);
    counts[g] = static_cast<int>(std::floor(exact));
    remainder[g] = exact - counts[g];
    assigned += counts[g];
  }
  std::array<std::size_t, Grade::kCount> order{0, 1, 2, 3, 4};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b]; });
  for (std::size_t i = 0; assigned < static_cast<int>(n_students); ++i, ++assigned) ++counts[order[i % Grade::kCount]];
  return counts;
}

std::string student_id_for(std::size_t index, std::size_t n_students) { return padded('s', index, n_students); }
std::string question_id_for(std::size_t index, std::size_t n_questions) { return padded('q', index, n_questions); }

int assignment_for(std::size_t question, std::size_t n_questions) noexcept {
  return 1 + static_cast<int>(question * kAssignmentCount / n_questions);
}

Cohort generate_cohort(const CohortConfig& config) {
  config.validate();
  const std::size_t n = config.n_students;
  const std::size_t q = config.n_questions;
  const std::uint64_t seed = config.seed;

  Cohort cohort;
  std::vector<double> difficulty(q);
  cohort.boolean_questions.resize(q);
  std::vector<std::string> question_ids(q);
  std::array<std::vector<std::size_t>, kAssignmentCount> by_assignment;
  for (std::size_t j = 0; j < q; ++j) {
    std::mt19937_64 rng(derive_key(seed, {kQuestionStream, j}));
    difficulty[j] = config.difficulty_spread * std::normal_distribution<double>(0.0, 1.0)(rng);
    cohort.boolean_questions[j] = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < config.boolean_question_fraction;
    question_ids[j] = question_id_for(j, q);
    by_assignment[static_cast<std::size_t>(assignment_for(j, q) - 1)].push_back(j);
  }

  for (std::size_t s = 0; s < n; ++s) {
    StudentRecord record;
    record.student_id = student_id_for(s, n);
    std::mt19937_64 student_rng(derive_key(seed, {kStudentStream, s}));
    const double ability = config.ability_spread * std::normal_distribution<double>(0.0, 1.0)(student_rng);

    for (std::size_t a = 0; a < kAssignmentCount; ++a) {
      const auto& questions = by_assignment[a];
      if (questions.empty()) continue;
      std::mt19937_64 rng(derive_key(seed, {kAssignmentStream, s, a}));
      std::lognormal_distribution<double> gap_dist(std::log(kMedianGapSeconds), kGapLogSpread);

      const std::size_t m = questions.size();
      const std::size_t sessions = std::min<std::size_t>(m, 1 + std::uniform_int_distribution<std::size_t>(0, 2)(rng));
      std::vector<std::size_t> cuts(m - 1);
      std::iota(cuts.begin(), cuts.end(), std::size_t{1});
      std::shuffle(cuts.begin(), cuts.end(), rng);
      cuts.resize(sessions - 1);
      std::sort(cuts.begin(), cuts.end());
      cuts.push_back(m);

      std::int64_t t = kCourseStart + static_cast<std::int64_t>(a) * kAssignmentSpacing +
                       std::uniform_int_distribution<std::int64_t>(0, 2 * kDay)(rng);
      std::size_t solved = 0;
      std::size_t begin = 0;
      for (std::size_t cut : cuts) {
        bool first_event = true;
        for (std::size_t k = begin; k < cut; ++k) {
          const std::size_t j = questions[k];
          const int max_attempts = cohort.boolean_questions[j] ? kBooleanMaxAttempts : kDefaultMaxAttempts;
          const double p_success = logistic(ability - difficulty[j]);
          for (int attempt = 1; attempt <= max_attempts; ++attempt) {
            if (!first_event) {
              const double gap = std::clamp(std::round(gap_dist(rng)), 1.0, static_cast<double>(kSessionGapSeconds));
              t += static_cast<std::int64_t>(gap);
            }
            first_event = false;
            const bool correct = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p_success;
            cohort.events.push_back(
                {record.student_id, question_ids[j], static_cast<int>(a + 1), t, attempt, correct});
            if (correct) {
              ++solved;
              break;
            }
          }
        }
        t += kMinSessionSeparation + std::uniform_int_distribution<std::int64_t>(0, kDay)(rng);
        begin = cut;
      }
      record.hw_scores[a] = 100.0 * static_cast<double>(solved) / static_cast<double>(m);
    }

    std::mt19937_64 test_rng(derive_key(seed, {kTestStream, s}));
    const double noise = config.test_noise * std::normal_distribution<double>(0.0, 1.0)(test_rng);
    record.test_score = 100.0 * logistic(ability + noise);
    const double hw_mean =
        std::accumulate(record.hw_scores.begin(), record.hw_scores.end(), 0.0) / static_cast<double>(kHomeworkCount);
    cohort.final_numeric.push_back(0.6 * record.test_score + 0.4 * hw_mean);
    cohort.students.push_back(std::move(record));
  }

  // Quantile cuts reproduce the target histogram exactly.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cohort.final_numeric[a] < cohort.final_numeric[b]; });
  std::size_t pos = 0;
  for (std::size_t g = 0; g < Grade::kCount; ++g) {
    for (int c = 0; c < config.target_grade_counts[g]; ++c) cohort.students[order[pos++]].final_grade = Grade::from_index(g);
  }

  std::sort(cohort.events.begin(), cohort.events.end(), [](const SubmissionEvent& x, const SubmissionEvent& y) {
    return std::tie(x.student_id, x.question_id, x.timestamp) < std::tie(y.student_id, y.question_id, y.timestamp);
  });
  return cohort;
}

void write_cohort(const Cohort& cohort, const std::filesystem::path& dir, const std::string& comment) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const std::filesystem::path& path, auto&& body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    if (!comment.empty()) out << "# " << comment << '\n';
    body(out);
  };
  write(dir / "submissions.csv", [&](std::ostream& out) { write_submissions(out, cohort.events); });
  write(dir / "gradebook.csv", [&](std::ostream& out) { write_gradebook(out, cohort.students); });
}

}  // namespace gradepred
