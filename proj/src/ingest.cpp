#include "gradepred/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <tuple>
#include <unordered_map>

#include "csv.hpp"

namespace gradepred {
namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("cannot open " + path.string());
  return in;
}

// Skips comment lines and checks the header. Returns the header's line number.
std::size_t read_header(std::istream& in, std::string_view expected) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = csv::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (t != expected) throw MalformedRow(line_no, "expected header '" + std::string(expected) + "'");
    return line_no;
  }
  throw MalformedRow(line_no, "missing header");
}

auto event_key(const SubmissionEvent& e) {
  return std::tie(e.student_id, e.question_id, e.timestamp, e.attempt_number, e.correct);
}

void check_assignment_consistency(std::span<const SubmissionEvent> events) {
  std::unordered_map<std::string_view, int> assignment_of;
  for (const auto& e : events) {
    auto [it, inserted] = assignment_of.emplace(e.question_id, e.assignment_id);
    if (!inserted && it->second != e.assignment_id) throw InconsistentAssignment(e.question_id);
  }
}

}  // namespace

ParsedSubmissions parse_submissions(std::istream& in) {
  std::size_t line_no = read_header(in, kSubmissionsHeader);
  ParsedSubmissions result;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 6) throw MalformedRow(line_no, "expected 6 columns");

    SubmissionEvent e;
    e.student_id = std::string(fields[0]);
    e.question_id = std::string(fields[1]);
    if (e.student_id.empty() || e.question_id.empty()) throw MalformedRow(line_no, "empty id");
    const auto assignment = csv::parse_number<int>(fields[2]);
    if (!assignment || *assignment < 1 || *assignment > kAssignmentCount) {
      throw MalformedRow(line_no, "assignment_id must be an integer in 1..4");
    }
    const auto timestamp = csv::parse_number<std::int64_t>(fields[3]);
    if (!timestamp) throw MalformedRow(line_no, "timestamp must be integer epoch seconds");
    const auto attempt = csv::parse_number<int>(fields[4]);
    if (!attempt || *attempt < 1) throw MalformedRow(line_no, "attempt_number must be an integer >= 1");
    if (fields[5] != "0" && fields[5] != "1") throw MalformedRow(line_no, "correct must be 0 or 1");
    e.assignment_id = *assignment;
    e.timestamp = *timestamp;
    e.attempt_number = *attempt;
    e.correct = fields[5] == "1";
    result.events.push_back(std::move(e));
  }
  if (result.events.empty()) throw EmptyLog();

  auto& events = result.events;
  std::sort(events.begin(), events.end(),
            [](const SubmissionEvent& a, const SubmissionEvent& b) { return event_key(a) < event_key(b); });
  check_assignment_consistency(events);

  // Renumber attempts densely in timestamp order and drop anything logged
  // after the first correct answer on a question.
  std::vector<SubmissionEvent> repaired;
  repaired.reserve(events.size());
  std::size_t pos = 0;
  while (pos < events.size()) {
    std::size_t end = pos;
    while (end < events.size() && events[end].student_id == events[pos].student_id &&
           events[end].question_id == events[pos].question_id) {
      ++end;
    }
    int attempt = 0;
    for (std::size_t i = pos; i < end; ++i) {
      SubmissionEvent e = std::move(events[i]);
      ++attempt;
      if (e.attempt_number != attempt) {
        e.attempt_number = attempt;
        ++result.warnings;
      }
      const bool correct = e.correct;
      repaired.push_back(std::move(e));
      if (correct) {
        result.warnings += end - i - 1;
        break;
      }
    }
    pos = end;
  }
  events = std::move(repaired);
  return result;
}

ParsedSubmissions parse_submissions(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_submissions(in);
}

std::vector<StudentRecord> parse_gradebook(std::istream& in) {
  static constexpr const char* kFields[] = {"hw1", "hw2", "hw3", "hw4", "test1"};
  std::size_t line_no = read_header(in, kGradebookHeader);
  std::vector<StudentRecord> records;
  std::set<std::string, std::less<>> seen;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    if (fields.size() != 7) throw MalformedRow(line_no, "expected 7 columns");

    StudentRecord r;
    r.student_id = std::string(fields[0]);
    if (r.student_id.empty()) throw MalformedRow(line_no, "empty student_id");
    if (!seen.insert(r.student_id).second) throw DuplicateStudent(r.student_id);
    for (std::size_t k = 0; k < 5; ++k) {
      const auto v = csv::parse_number<double>(fields[k + 1]);
      if (!v || !std::isfinite(*v)) throw MalformedRow(line_no, std::string(kFields[k]) + " is not a number");
      if (*v < 0.0 || *v > 100.0) throw ScoreOutOfRange(r.student_id, kFields[k]);
      if (k < kHomeworkCount) {
        r.hw_scores[k] = *v;
      } else {
        r.test_score = *v;
      }
    }
    const auto letter = fields[6];
    const auto grade = letter.size() == 1 ? Grade::from_letter(letter.front()) : std::nullopt;
    if (!grade) throw UnknownGrade(r.student_id);
    r.final_grade = *grade;
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<StudentRecord> parse_gradebook(const std::filesystem::path& path) {
  auto in = open_or_throw(path);
  return parse_gradebook(in);
}

Dataset build_dataset(std::vector<SubmissionEvent> events, std::vector<StudentRecord> students) {
  if (events.empty()) throw EmptyLog();
  if (students.empty()) throw IngestError("gradebook has no students");

  std::sort(students.begin(), students.end(),
            [](const StudentRecord& a, const StudentRecord& b) { return a.student_id < b.student_id; });
  for (std::size_t i = 1; i < students.size(); ++i) {
    if (students[i].student_id == students[i - 1].student_id) throw DuplicateStudent(students[i].student_id);
  }
  std::sort(events.begin(), events.end(),
            [](const SubmissionEvent& a, const SubmissionEvent& b) { return event_key(a) < event_key(b); });
  check_assignment_consistency(events);

  std::set<std::string_view> known;
  for (const auto& s : students) known.insert(s.student_id);
  std::set<std::pair<int, std::string_view>> questions;
  for (const auto& e : events) {
    if (!known.contains(e.student_id)) throw OrphanEvent(e.student_id);
    questions.emplace(e.assignment_id, e.question_id);
  }

  std::map<std::string, QuestionInfo, std::less<>> catalog;
  std::size_t index = 0;
  for (const auto& [assignment, id] : questions) catalog.emplace(std::string(id), QuestionInfo{assignment, index++});
  return Dataset(std::move(events), std::move(students), std::move(catalog));
}

Dataset load_dataset(const std::filesystem::path& submissions, const std::filesystem::path& gradebook,
                     std::size_t* warnings) {
  auto parsed = parse_submissions(submissions);
  if (warnings != nullptr) *warnings += parsed.warnings;
  return build_dataset(std::move(parsed.events), parse_gradebook(gradebook));
}

void write_submissions(std::ostream& out, std::span<const SubmissionEvent> events) {
  out << kSubmissionsHeader << '\n';
  for (const auto& e : events) {
    out << e.student_id << ',' << e.question_id << ',' << e.assignment_id << ',' << e.timestamp << ','
        << e.attempt_number << ',' << (e.correct ? '1' : '0') << '\n';
  }
}

void write_gradebook(std::ostream& out, std::span<const StudentRecord> students) {
  out << kGradebookHeader << '\n';
  for (const auto& s : students) {
    out << s.student_id;
    for (double hw : s.hw_scores) out << ',' << csv::format_double(hw);
    out << ',' << csv::format_double(s.test_score) << ',' << s.final_grade.letter() << '\n';
  }
}

}  // namespace gradepred
