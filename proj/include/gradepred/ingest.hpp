#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradepred/dataset.hpp"

namespace gradepred {

inline constexpr const char* kSubmissionsHeader =
    "student_id,question_id,assignment_id,timestamp,attempt_number,correct";
inline constexpr const char* kGradebookHeader = "student_id,hw1,hw2,hw3,hw4,test1,final_grade";

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class MalformedRow : public IngestError {
 public:
  MalformedRow(std::size_t line_no, const std::string& why)
      : IngestError("line " + std::to_string(line_no) + ": " + why), line_no_(line_no) {}
  std::size_t line_no() const noexcept { return line_no_; }

 private:
  std::size_t line_no_;
};

class EmptyLog : public IngestError {
 public:
  EmptyLog() : IngestError("submission log has no data rows") {}
};

class DuplicateStudent : public IngestError {
 public:
  explicit DuplicateStudent(std::string id) : IngestError("duplicate student " + id), id_(std::move(id)) {}
  const std::string& student_id() const noexcept { return id_; }

 private:
  std::string id_;
};

class ScoreOutOfRange : public IngestError {
 public:
  ScoreOutOfRange(std::string id, std::string field)
      : IngestError("score " + field + " of student " + id + " is outside [0,100]"),
        id_(std::move(id)),
        field_(std::move(field)) {}
  const std::string& student_id() const noexcept { return id_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string id_;
  std::string field_;
};

class UnknownGrade : public IngestError {
 public:
  explicit UnknownGrade(std::string id) : IngestError("unknown final grade for student " + id), id_(std::move(id)) {}
  const std::string& student_id() const noexcept { return id_; }

 private:
  std::string id_;
};

class OrphanEvent : public IngestError {
 public:
  explicit OrphanEvent(std::string id)
      : IngestError("submission references unknown student " + id), id_(std::move(id)) {}
  const std::string& student_id() const noexcept { return id_; }

 private:
  std::string id_;
};

class InconsistentAssignment : public IngestError {
 public:
  explicit InconsistentAssignment(std::string question_id)
      : IngestError("question " + question_id + " appears under more than one assignment"),
        question_id_(std::move(question_id)) {}
  const std::string& question_id() const noexcept { return question_id_; }

 private:
  std::string question_id_;
};

struct ParsedSubmissions {
  std::vector<SubmissionEvent> events;
  // Rows whose attempt_number was rewritten, plus rows dropped because they
  // followed a correct answer on the same question.
  std::size_t warnings = 0;
};

// Lines starting with '#' before the header are treated as comments.
ParsedSubmissions parse_submissions(std::istream& in);
ParsedSubmissions parse_submissions(const std::filesystem::path& path);

std::vector<StudentRecord> parse_gradebook(std::istream& in);
std::vector<StudentRecord> parse_gradebook(const std::filesystem::path& path);

// Builds the question catalog and enforces the cross-reference invariants.
// Question ordinals follow (assignment_id, question_id) order.
Dataset build_dataset(std::vector<SubmissionEvent> events, std::vector<StudentRecord> students);

// Loads both files and builds the dataset; warnings accumulate into *warnings.
Dataset load_dataset(const std::filesystem::path& submissions, const std::filesystem::path& gradebook,
                     std::size_t* warnings = nullptr);

void write_submissions(std::ostream& out, std::span<const SubmissionEvent> events);
void write_gradebook(std::ostream& out, std::span<const StudentRecord> students);

}  // namespace gradepred
