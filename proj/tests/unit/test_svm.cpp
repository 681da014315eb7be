#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "gradepred/svm.hpp"

using namespace gradepred;

namespace {

Matrix signed_kernel(const Matrix& k, std::span<const int> y) {
  Matrix q(k.rows(), k.cols());
  for (std::size_t i = 0; i < k.rows(); ++i) {
    for (std::size_t j = 0; j < k.cols(); ++j) q(i, j) = y[i] * y[j] * k(i, j);
  }
  return q;
}

}  // namespace

TEST_SUITE("svm") {
  TEST_CASE("two point closed form") {
    // 1-D points 0 (+1) and 1 (-1), gamma 1: k = exp(-1), alpha = min(C, 1/(1-k)).
    Matrix x(2, 1);
    x(1, 0) = 1.0;
    const auto k = rbf_kernel_matrix(x, 1.0);
    CHECK(k(0, 1) == doctest::Approx(std::exp(-1.0)));
    const std::vector<int> y{1, -1};
    for (double c : {0.5, 1.0, 10.0}) {
      const auto svm = fit_binary_svm(k, y, c);
      const double expected = std::min(c, 1.0 / (1.0 - std::exp(-1.0)));
      REQUIRE(svm.solution.alpha.size() == 2);
      CHECK(svm.solution.alpha[0] == doctest::Approx(expected).epsilon(1e-6));
      CHECK(svm.solution.alpha[1] == doctest::Approx(expected).epsilon(1e-6));
      const std::vector<double> row0{k(0, 0), k(0, 1)}, row1{k(1, 0), k(1, 1)};
      CHECK(svm.decision(row0) > 0.0);
      CHECK(svm.decision(row1) < 0.0);
    }
  }

  TEST_CASE("xor is separated by the rbf kernel") {
    Matrix x(4, 2);
    x(1, 0) = 1;
    x(2, 1) = 1;
    x(3, 0) = 1;
    x(3, 1) = 1;
    const std::vector<Grade> y{Grade(5), Grade(1), Grade(1), Grade(5)};
    ModelSpec spec;
    const SvmRbfModel model(spec, x, y);
    CHECK(model.gamma() == 0.5);
    for (std::size_t r = 0; r < 4; ++r) CHECK(model.predict(x.row(r)).grade == y[r]);

    const auto kernel = rbf_kernel_matrix(x, 0.5);
    const std::vector<int> labels{1, -1, -1, 1};
    const auto oracle = oracle::brute_force_svm_dual(kernel, labels, 1.0);
    CHECK(model.pairs()[0].svm.solution.dual_objective == doctest::Approx(oracle.objective).epsilon(1e-6));
  }

  TEST_CASE("dual objective never decreases") {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = fixtures::random_matrix(rng, 20, 3, -1, 1);
      std::vector<int> y(20);
      for (std::size_t i = 0; i < 20; ++i) y[i] = x(i, 0) + 0.3 * x(i, 1) > 0 ? 1 : -1;
      y[0] = 1;
      y[1] = -1;
      const auto q = signed_kernel(rbf_kernel_matrix(x, 1.0 / 3.0), y);
      const std::vector<double> p(20, -1.0);
      SmoOptions opt;
      opt.trace_objective = true;
      const auto res = solve_smo(q, p, y, 1.0, opt);
      CHECK(res.converged);
      for (std::size_t i = 1; i < res.objective_trace.size(); ++i) {
        CHECK(res.objective_trace[i] >= res.objective_trace[i - 1] - 1e-12);
      }
      CHECK(kkt_violation(q, p, y, 1.0, res.alpha) < 1e-3);
    }
  }

  TEST_CASE("duplicated training points leave the decision function unchanged while the box is inactive") {
    // Duplicating every point halves each optimal alpha. As long as the
    // original alphas stay below C/2 the halved point is feasible and optimal,
    // so the decision function is identical.
    std::mt19937_64 rng(23);
    int compared = 0;
    for (int trial = 0; trial < 20; ++trial) {
      const auto x = fixtures::random_matrix(rng, 6, 2, -1, 1);
      std::vector<int> y{1, -1, 1, -1, 1, -1};
      std::shuffle(y.begin(), y.end(), rng);
      const double c = 1e4;
      const auto k = rbf_kernel_matrix(x, 0.5);
      const auto truth = oracle::brute_force_svm_dual(k, y, c);
      if (*std::max_element(truth.alpha.begin(), truth.alpha.end()) >= c / 2) continue;
      ++compared;
      std::vector<std::size_t> twice;
      std::vector<int> y2;
      for (std::size_t r = 0; r < 6; ++r) {
        for (int copy = 0; copy < 2; ++copy) {
          twice.push_back(r);
          y2.push_back(y[r]);
        }
      }
      SmoOptions tight;
      tight.tolerance = 1e-8;
      const auto a = fit_binary_svm(k, y, c, tight);
      const auto b = fit_binary_svm(rbf_kernel_matrix(x.select_rows(twice), 0.5), y2, c, tight);
      const auto probe = fixtures::random_matrix(rng, 10, 2, -1, 1);
      for (std::size_t r = 0; r < probe.rows(); ++r) {
        std::vector<double> ka, kb;
        for (std::size_t s : a.support) ka.push_back(rbf_kernel(probe.row(r), x.row(s), 0.5));
        for (std::size_t s : b.support) kb.push_back(rbf_kernel(probe.row(r), x.row(twice[s]), 0.5));
        CHECK(a.decision(ka) == doctest::Approx(b.decision(kb)).epsilon(1e-5));
      }
    }
    CHECK(compared >= 10);
  }

  TEST_CASE("one-vs-one voting") {
    Matrix x(6, 1);
    for (std::size_t r = 0; r < 6; ++r) x(r, 0) = static_cast<double>(r) * 3.0;
    const std::vector<Grade> y{Grade(1), Grade(1), Grade(3), Grade(3), Grade(5), Grade(5)};
    const SvmRbfModel model(ModelSpec{}, x, y);
    CHECK(model.pairs().size() == 3);
    for (std::size_t r = 0; r < 6; ++r) {
      const auto out = model.predict(x.row(r));
      CHECK(out.grade == y[r]);
      CHECK(out.class_scores[y[r].index()] >= 2.0);
      CHECK(out.class_scores[1] == 0.0);
    }
    const std::vector<double> wrong{1.0, 2.0};
    CHECK_THROWS_AS(model.predict(wrong), DimensionMismatch);
  }

  TEST_CASE("single class training set") {
    Matrix x(3, 1);
    x(1, 0) = 1;
    x(2, 0) = 2;
    const std::vector<Grade> y(3, Grade(4));
    const SvmRbfModel model(ModelSpec{}, x, y);
    CHECK(model.predict(x.row(0)).grade == Grade(4));
  }
}
