#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradepred/dataset.hpp"
#include "gradepred/matrix.hpp"

namespace gradepred {

// Adjacent tries at most this far apart belong to the same session.
inline constexpr std::int64_t kSessionGapSeconds = 7200;
// More than 5 submissions per minute.
inline constexpr double kQuickResponseSeconds = 12.0;

enum class FeatureGroup { PerQuestionPerformance, SubmissionsPerQuestion, ResponseTime, SessionsPerAssignment, Scores };

std::string_view to_string(FeatureGroup group) noexcept;

struct FeatureColumn {
  std::string name;
  FeatureGroup group;

  bool operator==(const FeatureColumn&) const = default;
};

struct FeatureMatrix {
  std::vector<std::string> row_ids;
  std::vector<FeatureColumn> columns;
  Matrix values;

  std::size_t rows() const noexcept { return values.rows(); }
  std::size_t cols() const noexcept { return values.cols(); }
  std::size_t count(FeatureGroup group) const noexcept;
  std::vector<FeatureGroup> groups() const;

  FeatureMatrix select_rows(std::span<const std::size_t> rows) const;

  bool operator==(const FeatureMatrix&) const = default;
};

struct Session {
  std::string student_id;
  int assignment_id = 1;
  std::vector<SubmissionEvent> events;  // time-ordered
};

// students x Q; 1 iff the student ever answered the question correctly.
Matrix per_question_performance(const Dataset& dataset);

// students x Q; number of attempts logged for each question.
Matrix submissions_per_question(const Dataset& dataset);

// Greedy split of one student's work on one assignment. A gap of exactly
// kSessionGapSeconds stays in the session.
std::vector<Session> segment_sessions(const Dataset& dataset, std::string_view student_id, int assignment_id);

// students x 4; session count per assignment.
Matrix sessions_per_assignment(const Dataset& dataset);

// Gaps between consecutive submissions inside a session, over all of the
// student's assignments. Every value is <= kSessionGapSeconds.
std::vector<double> response_times(const Dataset& dataset, std::string_view student_id);

// mean + 2 * population stddev over every response time in the dataset.
double long_response_threshold(const Dataset& dataset);

// students x 4: [long_count, quick_count, long_fraction, quick_fraction].
Matrix response_time_features(const Dataset& dataset);

// students x 5: [hw1, hw2, hw3, hw4, test1].
Matrix score_features(const Dataset& dataset);

// 2Q + 13 columns in block order: performance, submissions, response time,
// sessions, scores.
FeatureMatrix assemble_feature_matrix(const Dataset& dataset);

void write_features_csv(std::ostream& out, const FeatureMatrix& features);

}  // namespace gradepred
