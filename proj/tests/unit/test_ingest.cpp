#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "../support/fixtures.hpp"
#include "gradepred/ingest.hpp"

using namespace gradepred;

namespace {

ParsedSubmissions parse_subs(const std::string& body) {
  std::istringstream in(std::string(kSubmissionsHeader) + "\n" + body);
  return parse_submissions(in);
}

std::vector<StudentRecord> parse_book(const std::string& body) {
  std::istringstream in(std::string(kGradebookHeader) + "\n" + body);
  return parse_gradebook(in);
}

}  // namespace

TEST_SUITE("ingest") {
  TEST_CASE("single valid row") {
    const auto parsed = parse_subs("s1,q1,1,100,1,1\n");
    REQUIRE(parsed.events.size() == 1);
    CHECK(parsed.warnings == 0);
    CHECK(parsed.events[0].student_id == "s1");
    CHECK(parsed.events[0].timestamp == 100);
    CHECK(parsed.events[0].correct);
  }

  TEST_CASE("comment lines and blank lines are skipped") {
    std::istringstream in("# generated\n" + std::string(kSubmissionsHeader) + "\n\ns1,q1,1,100,1,0\n");
    CHECK(parse_submissions(in).events.size() == 1);
  }

  TEST_CASE("attempt gaps are renumbered with a warning") {
    const auto parsed = parse_subs("s1,q1,1,100,1,0\ns1,q1,1,200,3,1\n");
    REQUIRE(parsed.events.size() == 2);
    CHECK(parsed.events[0].attempt_number == 1);
    CHECK(parsed.events[1].attempt_number == 2);
    CHECK(parsed.warnings == 1);
  }

  TEST_CASE("events after the first correct answer are dropped") {
    const auto parsed = parse_subs("s1,q1,1,100,1,1\ns1,q1,1,200,2,0\ns1,q2,1,300,1,0\n");
    CHECK(parsed.events.size() == 2);
    CHECK(parsed.warnings == 1);
  }

  TEST_CASE("schema violations name the line") {
    try {
      parse_subs("s1,q1,1,100,1,1\ns1,q2,1,100,1,maybe\n");
      FAIL("expected MalformedRow");
    } catch (const MalformedRow& e) {
      CHECK(e.line_no() == 3);
    }
    CHECK_THROWS_AS(parse_subs("s1,q1,1,abc,1,1\n"), MalformedRow);
    CHECK_THROWS_AS(parse_subs("s1,q1,5,100,1,1\n"), MalformedRow);
    CHECK_THROWS_AS(parse_subs("s1,q1,1,100,1\n"), MalformedRow);
    CHECK_THROWS_AS(parse_subs("s1,q1,1,100,0,1\n"), MalformedRow);
    std::istringstream bad_header("student,question\ns1,q1,1,100,1,1\n");
    CHECK_THROWS_AS(parse_submissions(bad_header), MalformedRow);
  }

  TEST_CASE("empty log") { CHECK_THROWS_AS(parse_subs(""), EmptyLog); }

  TEST_CASE("gradebook rows") {
    const auto book = parse_book("s1,90,85,70,100,88,A\n");
    REQUIRE(book.size() == 1);
    CHECK(book[0].hw_scores == std::array<double, 4>{90, 85, 70, 100});
    CHECK(book[0].test_score == 88);
    CHECK(book[0].final_grade.value() == 5);
    CHECK_THROWS_AS(parse_book("s1,101,85,70,100,88,A\n"), ScoreOutOfRange);
    CHECK_THROWS_AS(parse_book("s1,90,85,70,100,-1,A\n"), ScoreOutOfRange);
    CHECK_THROWS_AS(parse_book("s1,90,85,70,100,88,E\n"), UnknownGrade);
    CHECK_THROWS_AS(parse_book("s1,90,85,70,100,88,A\ns1,1,1,1,1,1,B\n"), DuplicateStudent);
  }

  TEST_CASE("catalog and cross references") {
    const auto ds = fixtures::dataset_from_csv("s1,q1,2,100,1,1\n", "s1,1,2,3,4,5,B\n");
    REQUIRE(ds.catalog().size() == 1);
    CHECK(ds.catalog().at("q1") == QuestionInfo{2, 0});
    CHECK_THROWS_AS(fixtures::dataset_from_csv("s2,q1,1,100,1,1\n", "s1,1,2,3,4,5,B\n"), OrphanEvent);
    CHECK_THROWS_AS(fixtures::dataset_from_csv("s1,q1,1,100,1,0\ns1,q1,2,200,2,1\n", "s1,1,2,3,4,5,B\n"),
                    InconsistentAssignment);
    CHECK_THROWS_AS(ds.student_index("nobody"), std::out_of_range);
  }

  TEST_CASE("students without submissions are kept") {
    const auto ds = fixtures::dataset_from_csv("s1,q1,1,100,1,1\n", "s1,1,2,3,4,5,B\ns2,0,0,0,0,0,F\n");
    CHECK(ds.students().size() == 2);
    CHECK(ds.events_of(ds.student_index("s2")).empty());
  }

  TEST_CASE("question ordinals follow assignment then id") {
    const auto ds = fixtures::dataset_from_csv("s1,qb,1,1,1,1\ns1,qa,2,2,1,1\ns1,qc,1,3,1,1\n", "s1,1,2,3,4,5,B\n");
    const auto ids = ds.question_ids();
    REQUIRE(ids.size() == 3);
    CHECK(ids[0] == "qb");
    CHECK(ids[1] == "qc");
    CHECK(ids[2] == "qa");
  }

  TEST_CASE("round trip and order insensitivity") {
    std::mt19937_64 rng(5);
    std::vector<std::string> rows;
    std::string book;
    for (int s = 0; s < 6; ++s) {
      book += "s" + std::to_string(s) + ",10,20,30,40,50," + std::string(1, "ABCDF"[s % 5]) + "\n";
      for (int q = 0; q < 5; ++q) {
        std::int64_t t = 1000 * q + 17 * s;
        const int attempts = 1 + (s + q) % 3;
        for (int a = 1; a <= attempts; ++a) {
          rows.push_back("s" + std::to_string(s) + ",q" + std::to_string(q) + "," + std::to_string(1 + q % 4) + "," +
                         std::to_string(t) + "," + std::to_string(a) + "," + (a == attempts ? "1" : "0"));
          t += 30;
        }
      }
    }
    auto join = [](const std::vector<std::string>& v) {
      std::string s;
      for (const auto& r : v) s += r + "\n";
      return s;
    };
    const auto original = fixtures::dataset_from_csv(join(rows), book);
    for (int trial = 0; trial < 5; ++trial) {
      std::shuffle(rows.begin(), rows.end(), rng);
      CHECK(fixtures::dataset_from_csv(join(rows), book) == original);
    }

    std::ostringstream subs_out, book_out;
    write_submissions(subs_out, original.events());
    write_gradebook(book_out, original.students());
    std::istringstream subs_in(subs_out.str()), book_in(book_out.str());
    auto parsed = parse_submissions(subs_in);
    CHECK(parsed.warnings == 0);
    CHECK(build_dataset(std::move(parsed.events), parse_gradebook(book_in)) == original);
  }
}
