#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gradepred/grade.hpp"

namespace gradepred {

inline constexpr int kAssignmentCount = 4;
inline constexpr std::size_t kHomeworkCount = 4;

// One graded attempt on one question by one student.
struct SubmissionEvent {
  std::string student_id;
  std::string question_id;
  int assignment_id = 1;
  std::int64_t timestamp = 0;  // epoch seconds
  int attempt_number = 1;
  bool correct = false;

  bool operator==(const SubmissionEvent&) const = default;
};

// Gradebook row for the first-six-weeks window.
struct StudentRecord {
  std::string student_id;
  std::array<double, kHomeworkCount> hw_scores{};
  double test_score = 0.0;
  Grade final_grade;

  bool operator==(const StudentRecord&) const = default;
};

struct QuestionInfo {
  int assignment_id = 1;
  std::size_t index = 0;

  bool operator==(const QuestionInfo&) const = default;
};

// Validated, immutable view of one course offering. Students are ordered by
// id; events by (student_id, question_id, timestamp).
class Dataset {
 public:
  Dataset(std::vector<SubmissionEvent> events, std::vector<StudentRecord> students,
          std::map<std::string, QuestionInfo, std::less<>> catalog);

  std::span<const SubmissionEvent> events() const noexcept { return events_; }
  std::span<const StudentRecord> students() const noexcept { return students_; }
  const std::map<std::string, QuestionInfo, std::less<>>& catalog() const noexcept { return catalog_; }

  std::size_t question_count() const noexcept { return question_ids_.size(); }
  // Question ids ordered by ordinal index.
  std::span<const std::string> question_ids() const noexcept { return question_ids_; }

  // Row position of a student; throws std::out_of_range for unknown ids.
  std::size_t student_index(std::string_view student_id) const;

  // All events of one student, in (question_id, timestamp) order.
  std::span<const SubmissionEvent> events_of(std::size_t student_index) const noexcept;

  bool operator==(const Dataset& other) const {
    return events_ == other.events_ && students_ == other.students_ && catalog_ == other.catalog_;
  }

 private:
  std::vector<SubmissionEvent> events_;
  std::vector<StudentRecord> students_;
  std::map<std::string, QuestionInfo, std::less<>> catalog_;
  std::vector<std::string> question_ids_;
  std::map<std::string, std::size_t, std::less<>> student_rows_;
  std::vector<std::pair<std::size_t, std::size_t>> event_ranges_;  // [begin, end) per student
};

}  // namespace gradepred
