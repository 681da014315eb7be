#include "gradepred/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "csv.hpp"

namespace gradepred {
namespace {

// One student's events on one assignment, ordered by (timestamp, question index).
std::vector<const SubmissionEvent*> timeline(const Dataset& dataset, std::size_t student, int assignment_id) {
  std::vector<const SubmissionEvent*> out;
  for (const auto& e : dataset.events_of(student)) {
    if (e.assignment_id == assignment_id) out.push_back(&e);
  }
  const auto& catalog = dataset.catalog();
  std::stable_sort(out.begin(), out.end(), [&](const SubmissionEvent* a, const SubmissionEvent* b) {
    if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
    return catalog.find(a->question_id)->second.index < catalog.find(b->question_id)->second.index;
  });
  return out;
}

// Calls fn(student_row, gap_seconds) for every in-session gap and
// on_session(student_row, assignment) for every session opened.
template <typename GapFn, typename SessionFn>
void walk_sessions(const Dataset& dataset, std::size_t student, GapFn&& on_gap, SessionFn&& on_session) {
  for (int a = 1; a <= kAssignmentCount; ++a) {
    const auto events = timeline(dataset, student, a);
    for (std::size_t i = 0; i < events.size(); ++i) {
      const std::int64_t gap = i == 0 ? kSessionGapSeconds + 1 : events[i]->timestamp - events[i - 1]->timestamp;
      if (gap > kSessionGapSeconds) {
        on_session(a);
      } else {
        on_gap(static_cast<double>(gap));
      }
    }
  }
}

}  // namespace

std::string_view to_string(FeatureGroup group) noexcept {
  switch (group) {
    case FeatureGroup::PerQuestionPerformance: return "PerQuestionPerformance";
    case FeatureGroup::SubmissionsPerQuestion: return "SubmissionsPerQuestion";
    case FeatureGroup::ResponseTime: return "ResponseTime";
    case FeatureGroup::SessionsPerAssignment: return "SessionsPerAssignment";
    case FeatureGroup::Scores: return "Scores";
  }
  return "?";
}

std::size_t FeatureMatrix::count(FeatureGroup group) const noexcept {
  return static_cast<std::size_t>(
      std::count_if(columns.begin(), columns.end(), [group](const FeatureColumn& c) { return c.group == group; }));
}

std::vector<FeatureGroup> FeatureMatrix::groups() const {
  std::vector<FeatureGroup> out;
  out.reserve(columns.size());
  for (const auto& c : columns) out.push_back(c.group);
  return out;
}

FeatureMatrix FeatureMatrix::select_rows(std::span<const std::size_t> rows) const {
  FeatureMatrix out;
  out.columns = columns;
  out.values = values.select_rows(rows);
  out.row_ids.reserve(rows.size());
  for (std::size_t r : rows) out.row_ids.push_back(row_ids[r]);
  return out;
}

Matrix per_question_performance(const Dataset& dataset) {
  Matrix m(dataset.students().size(), dataset.question_count());
  for (std::size_t s = 0; s < m.rows(); ++s) {
    for (const auto& e : dataset.events_of(s)) {
      if (e.correct) m(s, dataset.catalog().find(e.question_id)->second.index) = 1.0;
    }
  }
  return m;
}

Matrix submissions_per_question(const Dataset& dataset) {
  Matrix m(dataset.students().size(), dataset.question_count());
  for (std::size_t s = 0; s < m.rows(); ++s) {
    for (const auto& e : dataset.events_of(s)) m(s, dataset.catalog().find(e.question_id)->second.index) += 1.0;
  }
  return m;
}

std::vector<Session> segment_sessions(const Dataset& dataset, std::string_view student_id, int assignment_id) {
  const std::size_t student = dataset.student_index(student_id);
  std::vector<Session> sessions;
  const SubmissionEvent* previous = nullptr;
  for (const SubmissionEvent* e : timeline(dataset, student, assignment_id)) {
    if (previous == nullptr || e->timestamp - previous->timestamp > kSessionGapSeconds) {
      sessions.push_back(Session{std::string(student_id), assignment_id, {}});
    }
    sessions.back().events.push_back(*e);
    previous = e;
  }
  return sessions;
}

Matrix sessions_per_assignment(const Dataset& dataset) {
  Matrix m(dataset.students().size(), kAssignmentCount);
  for (std::size_t s = 0; s < m.rows(); ++s) {
    walk_sessions(
        dataset, s, [](double) {}, [&](int a) { m(s, static_cast<std::size_t>(a - 1)) += 1.0; });
  }
  return m;
}

std::vector<double> response_times(const Dataset& dataset, std::string_view student_id) {
  std::vector<double> out;
  walk_sessions(
      dataset, dataset.student_index(student_id), [&](double gap) { out.push_back(gap); }, [](int) {});
  return out;
}

double long_response_threshold(const Dataset& dataset) {
  // Two passes for a stable mean and variance.
  double sum = 0.0;
  std::size_t n = 0;
  for (std::size_t s = 0; s < dataset.students().size(); ++s) {
    walk_sessions(
        dataset, s,
        [&](double gap) {
          sum += gap;
          ++n;
        },
        [](int) {});
  }
  if (n == 0) return 0.0;
  const double mean = sum / static_cast<double>(n);
  double sq = 0.0;
  for (std::size_t s = 0; s < dataset.students().size(); ++s) {
    walk_sessions(
        dataset, s, [&](double gap) { sq += (gap - mean) * (gap - mean); }, [](int) {});
  }
  return mean + 2.0 * std::sqrt(sq / static_cast<double>(n));
}

Matrix response_time_features(const Dataset& dataset) {
  const double long_cut = long_response_threshold(dataset);
  Matrix m(dataset.students().size(), 4);
  for (std::size_t s = 0; s < m.rows(); ++s) {
    double total = 0.0;
    double longs = 0.0;
    double quicks = 0.0;
    walk_sessions(
        dataset, s,
        [&](double gap) {
          total += 1.0;
          if (gap > long_cut) longs += 1.0;
          if (gap < kQuickResponseSeconds) quicks += 1.0;
        },
        [](int) {});
    m(s, 0) = longs;
    m(s, 1) = quicks;
    m(s, 2) = total > 0.0 ? longs / total : 0.0;
    m(s, 3) = total > 0.0 ? quicks / total : 0.0;
  }
  return m;
}

Matrix score_features(const Dataset& dataset) {
  const auto students = dataset.students();
  Matrix m(students.size(), kHomeworkCount + 1);
  for (std::size_t s = 0; s < students.size(); ++s) {
    for (std::size_t k = 0; k < kHomeworkCount; ++k) m(s, k) = students[s].hw_scores[k];
    m(s, kHomeworkCount) = students[s].test_score;
  }
  return m;
}

FeatureMatrix assemble_feature_matrix(const Dataset& dataset) {
  FeatureMatrix fm;
  for (const auto& s : dataset.students()) fm.row_ids.push_back(s.student_id);

  const std::size_t q = dataset.question_count();
  for (std::size_t i = 0; i < q; ++i) {
    fm.columns.push_back({"perf:q" + std::to_string(i), FeatureGroup::PerQuestionPerformance});
  }
  for (std::size_t i = 0; i < q; ++i) {
    fm.columns.push_back({"subs:q" + std::to_string(i), FeatureGroup::SubmissionsPerQuestion});
  }
  for (const char* name : {"rt:long_n", "rt:quick_n", "rt:long_f", "rt:quick_f"}) {
    fm.columns.push_back({name, FeatureGroup::ResponseTime});
  }
  for (int a = 1; a <= kAssignmentCount; ++a) {
    fm.columns.push_back({"sess:a" + std::to_string(a), FeatureGroup::SessionsPerAssignment});
  }
  for (const char* name : {"score:hw1", "score:hw2", "score:hw3", "score:hw4", "score:test1"}) {
    fm.columns.push_back({name, FeatureGroup::Scores});
  }

  const std::array<Matrix, 5> blocks{per_question_performance(dataset), submissions_per_question(dataset),
                                     response_time_features(dataset), sessions_per_assignment(dataset),
                                     score_features(dataset)};
  fm.values = Matrix::hstack(blocks);
  return fm;
}

void write_features_csv(std::ostream& out, const FeatureMatrix& features) {
  out << "student_id";
  for (const auto& c : features.columns) out << ',' << c.name;
  out << '\n';
  for (std::size_t r = 0; r < features.rows(); ++r) {
    out << features.row_ids[r];
    for (double v : features.values.row(r)) out << ',' << csv::format_double(v);
    out << '\n';
  }
}

}  // namespace gradepred
