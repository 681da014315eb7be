#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "gradepred/dataset.hpp"

namespace gradepred {

inline constexpr int kBooleanMaxAttempts = 1;
inline constexpr int kDefaultMaxAttempts = 3;
// F, D, C, B, A counts of the reference 249-student cohort.
inline constexpr std::array<int, Grade::kCount> kReferenceGradeCounts{26, 10, 22, 72, 119};

class InfeasibleConfig : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CohortConfig {
  std::size_t n_students = 249;
  std::size_t n_questions = 409;
  double boolean_question_fraction = 0.2;
  std::array<int, Grade::kCount> target_grade_counts = kReferenceGradeCounts;  // F..A
  double ability_spread = 1.0;
  double difficulty_spread = 1.5;
  double test_noise = 0.5;  // stddev of the test-day ability perturbation
  std::uint64_t seed = 42;

  void validate() const;  // throws InfeasibleConfig
};

// Reference grade proportions rescaled to n students (largest remainder).
std::array<int, Grade::kCount> scaled_grade_counts(std::size_t n_students);

struct Cohort {
  std::vector<SubmissionEvent> events;  // (student, question, timestamp) order
  std::vector<StudentRecord> students;
  std::vector<bool> boolean_questions;  // by question ordinal
  std::vector<double> final_numeric;    // 0.6 test + 0.4 mean(hw), by student
};

// Logistic ability/difficulty attempt model. Every random draw is keyed on
// (seed, entity), so output does not depend on generation order.
Cohort generate_cohort(const CohortConfig& config);

std::string student_id_for(std::size_t index, std::size_t n_students);
std::string question_id_for(std::size_t index, std::size_t n_questions);
int assignment_for(std::size_t question, std::size_t n_questions) noexcept;

// Writes submissions.csv and gradebook.csv into dir, each preceded by the
// given comment line (without the leading '#').
void write_cohort(const Cohort& cohort, const std::filesystem::path& dir, const std::string& comment = {});

}  // namespace gradepred
