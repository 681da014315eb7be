#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "gradepred/matrix.hpp"
#include "gradepred/models.hpp"

namespace gradepred {

struct SmoOptions {
  double tolerance = 1e-3;          // maximal KKT violation at exit
  std::size_t max_passes = 10'000;  // one pass = n pair updates
  bool trace_objective = false;
};

struct SmoResult {
  std::vector<double> alpha;
  std::vector<double> gradient;  // Q alpha + p
  double rho = 0.0;              // decision offset: f(x) = sum(...) - rho
  double dual_objective = 0.0;   // -(0.5 a'Qa + p'a), maximized
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> objective_trace;  // dual objective after each update
};

// Solves min 0.5 a'Qa + p'a  s.t.  y'a = 0, 0 <= a <= C, starting from a = 0.
// Q must already carry the label signs (Q_ij = y_i y_j K_ij). Working pairs
// come from second-order maximal-violating-pair selection; the solver stops
// once no pair violates the KKT conditions by more than the tolerance.
SmoResult solve_smo(const Matrix& q, std::span<const double> p, std::span<const int> y, double c,
                    const SmoOptions& options = {});

// Largest KKT violation (m(a) - M(a)) of a candidate solution.
double kkt_violation(const Matrix& q, std::span<const double> p, std::span<const int> y, double c,
                     std::span<const double> alpha);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept;
Matrix rbf_kernel_matrix(const Matrix& x, double gamma);

// Two-class soft-margin SVM on a precomputed kernel.
struct BinarySvm {
  std::vector<std::size_t> support;  // rows of the kernel matrix with alpha > 0
  std::vector<double> coef;          // y_i * alpha_i
  double rho = 0.0;
  SmoResult solution;

  // kernel_row[j] = K(x, support[j])
  double decision(std::span<const double> kernel_row) const noexcept;
};

// labels: +1 / -1 per kernel row.
BinarySvm fit_binary_svm(const Matrix& kernel, std::span<const int> labels, double c,
                         const SmoOptions& options = {});

// One-vs-one RBF classifier with gamma = 1/d.
class SvmRbfModel final : public TrainedModel {
 public:
  struct Pair {
    Grade positive;  // lower grade of the pair, label +1
    Grade negative;
    BinarySvm svm;
    std::vector<std::size_t> rows;  // training rows used by this pair
  };

  SvmRbfModel(const ModelSpec& spec, const Matrix& x, std::span<const Grade> y,
              const SmoOptions& options = {});

  double gamma() const noexcept { return gamma_; }
  std::span<const Pair> pairs() const noexcept { return pairs_; }
  // Decision values for every pair, in pairs() order.
  std::vector<double> decision_values(std::span<const double> x) const;

 protected:
  PredictionOutcome do_predict(std::span<const double> x) const override;

 private:
  double gamma_;
  Matrix train_x_;
  std::vector<Grade> classes_;
  std::vector<Pair> pairs_;
};

}  // namespace gradepred
