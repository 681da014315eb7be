#include "gradepred/dataset.hpp"

#include <stdexcept>

namespace gradepred {

Dataset::Dataset(std::vector<SubmissionEvent> events, std::vector<StudentRecord> students,
                 std::map<std::string, QuestionInfo, std::less<>> catalog)
    : events_(std::move(events)), students_(std::move(students)), catalog_(std::move(catalog)) {
  question_ids_.resize(catalog_.size());
  for (const auto& [id, info] : catalog_) {
    if (info.index >= question_ids_.size() || !question_ids_[info.index].empty()) {
      throw std::invalid_argument("question ordinals must be contiguous and unique");
    }
    question_ids_[info.index] = id;
  }
  for (std::size_t i = 0; i < students_.size(); ++i) student_rows_.emplace(students_[i].student_id, i);

  event_ranges_.assign(students_.size(), {0, 0});
  std::size_t pos = 0;
  while (pos < events_.size()) {
    std::size_t end = pos;
    while (end < events_.size() && events_[end].student_id == events_[pos].student_id) ++end;
    event_ranges_[student_index(events_[pos].student_id)] = {pos, end};
    pos = end;
  }
}

std::size_t Dataset::student_index(std::string_view student_id) const {
  auto it = student_rows_.find(student_id);
  if (it == student_rows_.end()) throw std::out_of_range("unknown student " + std::string(student_id));
  return it->second;
}

std::span<const SubmissionEvent> Dataset::events_of(std::size_t student_index) const noexcept {
  const auto [begin, end] = event_ranges_[student_index];
  return std::span<const SubmissionEvent>(events_).subspan(begin, end - begin);
}

}  // namespace gradepred
