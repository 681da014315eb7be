#pragma once

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "gradepred/dataset.hpp"
#include "gradepred/ingest.hpp"
#include "gradepred/matrix.hpp"

namespace fixtures {

// Builds a dataset from CSV bodies (header lines are added here).
inline gradepred::Dataset dataset_from_csv(const std::string& submissions_body, const std::string& gradebook_body,
                                           std::size_t* warnings = nullptr) {
  std::istringstream subs(std::string(gradepred::kSubmissionsHeader) + "\n" + submissions_body);
  std::istringstream book(std::string(gradepred::kGradebookHeader) + "\n" + gradebook_body);
  auto parsed = gradepred::parse_submissions(subs);
  if (warnings) *warnings = parsed.warnings;
  return gradepred::build_dataset(std::move(parsed.events), gradepred::parse_gradebook(book));
}

inline gradepred::Matrix random_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, double lo = 0.0,
                                       double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  gradepred::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

// Small integer grid values make duplicate coordinates and exact ties common.
inline gradepred::Matrix grid_matrix(std::mt19937_64& rng, std::size_t rows, std::size_t cols, int levels) {
  std::uniform_int_distribution<int> u(0, levels - 1);
  gradepred::Matrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = u(rng);
  }
  return m;
}

inline std::vector<gradepred::Grade> random_grades(std::mt19937_64& rng, std::size_t n, int lo = 1, int hi = 5) {
  std::uniform_int_distribution<int> u(lo, hi);
  std::vector<gradepred::Grade> y;
  for (std::size_t i = 0; i < n; ++i) y.emplace_back(u(rng));
  return y;
}

}  // namespace fixtures
