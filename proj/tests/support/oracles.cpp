#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace oracle {

Grade argmax_lower(const ClassScores& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return Grade::from_index(best);
}

bool integer_variance_exceeds(std::span<const long long> column, long long num, long long den) {
  // var = (n*S2 - S1^2) / n^2 > num/den  <=>  den*(n*S2 - S1^2) > num*n^2
  const long long n = static_cast<long long>(column.size());
  long long s1 = 0;
  long long s2 = 0;
  for (long long v : column) {
    s1 += v;
    s2 += v * v;
  }
  return den * (n * s2 - s1 * s1) > num * n * n;
}

long double two_pass_variance(std::span<const double> column) {
  long double mean = 0.0L;
  for (double v : column) mean += v;
  mean /= static_cast<long double>(column.size());
  long double sq = 0.0L;
  for (double v : column) sq += (v - mean) * (v - mean);
  return sq / static_cast<long double>(column.size());
}

namespace {

// Dense Gaussian elimination with partial pivoting; nullopt when singular.
std::optional<std::vector<double>> solve_linear(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    }
    if (std::abs(a[pivot][col]) < 1e-12) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace

DualSolution brute_force_svm_dual(const Matrix& kernel, std::span<const int> labels, double c) {
  const std::size_t n = labels.size();
  auto objective = [&](const std::vector<double>& a) {
    double lin = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      lin += a[i];
      for (std::size_t j = 0; j < n; ++j) quad += a[i] * a[j] * labels[i] * labels[j] * kernel(i, j);
    }
    return lin - 0.5 * quad;
  };

  DualSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= 3;
  for (std::size_t code = 0; code < combos; ++code) {
    std::vector<int> state(n);  // 0 lower, 1 upper, 2 free
    for (std::size_t i = 0, v = code; i < n; ++i, v /= 3) state[i] = static_cast<int>(v % 3);
    std::vector<double> alpha(n, 0.0);
    std::vector<std::size_t> free;
    for (std::size_t i = 0; i < n; ++i) {
      if (state[i] == 1) alpha[i] = c;
      if (state[i] == 2) free.push_back(i);
    }
    double fixed_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) fixed_sum += labels[i] * alpha[i];
    if (free.empty()) {
      if (std::abs(fixed_sum) > 1e-12) continue;
    } else {
      // Stationarity on the free set with multiplier b:
      //   sum_j y_i y_j K_ij a_j + y_i b = 1   (i free)
      //   sum_free y_j a_j = -fixed_sum
      const std::size_t m = free.size();
      std::vector<std::vector<double>> a(m + 1, std::vector<double>(m + 1, 0.0));
      std::vector<double> rhs(m + 1, 0.0);
      for (std::size_t r = 0; r < m; ++r) {
        const std::size_t i = free[r];
        for (std::size_t s = 0; s < m; ++s) {
          const std::size_t j = free[s];
          a[r][s] = labels[i] * labels[j] * kernel(i, j);
        }
        a[r][m] = labels[i];
        rhs[r] = 1.0;
        for (std::size_t j = 0; j < n; ++j) {
          if (state[j] == 1) rhs[r] -= labels[i] * labels[j] * kernel(i, j) * c;
        }
        a[m][r] = labels[i];
      }
      rhs[m] = -fixed_sum;
      const auto sol = solve_linear(a, rhs);
      if (!sol) continue;
      bool feasible = true;
      for (std::size_t r = 0; r < m; ++r) {
        if ((*sol)[r] < -1e-12 || (*sol)[r] > c + 1e-12) feasible = false;
        alpha[free[r]] = std::clamp((*sol)[r], 0.0, c);
      }
      if (!feasible) continue;
    }
    const double obj = objective(alpha);
    if (obj > best.objective) {
      best.objective = obj;
      best.alpha = alpha;
    }
  }

  // Bias: average over free vectors, else midpoint of the feasible interval.
  std::vector<double> margin(n, 0.0);  // sum_j y_j a_j K_ij
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) margin[i] += labels[j] * best.alpha[j] * kernel(i, j);
  }
  double free_sum = 0.0;
  std::size_t free_count = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double target = labels[i] - margin[i];  // b that puts point i on the margin
    const double a = best.alpha[i];
    if (a > 1e-9 && a < c - 1e-9) {
      free_sum += target;
      ++free_count;
    } else if ((a <= 1e-9) == (labels[i] > 0)) {
      lower = std::max(lower, target);  // y f >= 1 needs b >= target for y=+1 at 0
    } else {
      upper = std::min(upper, target);
    }
  }
  best.b = free_count > 0 ? free_sum / static_cast<double>(free_count) : 0.5 * (lower + upper);
  return best;
}

KnnAnswer knn(const Matrix& x, std::span<const Grade> y, std::size_t k, std::span<const double> query) {
  std::vector<std::pair<double, std::size_t>> d;
  for (std::size_t r = 0; r < x.rows(); ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < x.cols(); ++c) s += (x(r, c) - query[c]) * (x(r, c) - query[c]);
    d.emplace_back(s, r);
  }
  std::sort(d.begin(), d.end());
  k = std::min(k, d.size());
  KnnAnswer answer;
  std::array<int, 5> votes{};
  for (std::size_t i = 0; i < k; ++i) {
    answer.neighbours.push_back(d[i].second);
    ++votes[y[d[i].second].index()];
  }
  const int top = *std::max_element(votes.begin(), votes.end());
  for (std::size_t nb : answer.neighbours) {
    if (votes[y[nb].index()] == top) {
      answer.grade = y[nb];
      break;
    }
  }
  return answer;
}

NbAnswer naive_bayes(const Matrix& x, std::span<const Grade> y, std::span<const double> query) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  double max_var = 0.0;
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> col;
    for (std::size_t r = 0; r < n; ++r) col.push_back(x(r, c));
    max_var = std::max(max_var, static_cast<double>(two_pass_variance(col)));
  }
  const double eps = max_var > 0.0 ? 1e-9 * max_var : 1e-9;

  NbAnswer answer;
  answer.present.assign(5, false);
  for (std::size_t g = 0; g < 5; ++g) {
    std::vector<std::size_t> rows;
    for (std::size_t r = 0; r < n; ++r) {
      if (y[r].index() == g) rows.push_back(r);
    }
    if (rows.empty()) {
      answer.log_joint[g] = -1e300;
      continue;
    }
    answer.present[g] = true;
    double score = std::log(static_cast<double>(rows.size()) / static_cast<double>(n));
    for (std::size_t c = 0; c < d; ++c) {
      std::vector<double> col;
      for (std::size_t r : rows) col.push_back(x(r, c));
      const double mean = std::accumulate(col.begin(), col.end(), 0.0) / static_cast<double>(col.size());
      const double var = static_cast<double>(two_pass_variance(col)) + eps;
      score += -0.5 * std::log(2.0 * M_PI * var) - (query[c] - mean) * (query[c] - mean) / (2.0 * var);
    }
    answer.log_joint[g] = score;
  }
  answer.grade = argmax_lower(answer.log_joint);
  return answer;
}

namespace {

double gini(const std::array<int, 5>& counts) {
  const int n = std::accumulate(counts.begin(), counts.end(), 0);
  double s = 1.0;
  for (int c : counts) s -= (static_cast<double>(c) / n) * (static_cast<double>(c) / n);
  return s;
}

}  // namespace

Cart::Cart(const Matrix& x, std::span<const Grade> y) {
  std::vector<std::size_t> rows(x.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  build(x, y, rows);
}

int Cart::build(const Matrix& x, std::span<const Grade> y, const std::vector<std::size_t>& rows) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  Node node;
  for (std::size_t r : rows) ++node.counts[y[r].index()];
  const double n = static_cast<double>(rows.size());
  const double parent = gini(node.counts);

  double best = parent;
  bool found = false;
  std::size_t best_feature = 0;
  double best_threshold = 0.0;
  for (std::size_t f = 0; f < x.cols(); ++f) {
    std::vector<double> values;
    for (std::size_t r : rows) values.push_back(x(r, f));
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());
    for (std::size_t i = 0; i + 1 < values.size(); ++i) {
      double t = values[i] + (values[i + 1] - values[i]) / 2.0;
      if (!(t < values[i + 1])) t = values[i];
      std::array<int, 5> left{}, right{};
      for (std::size_t r : rows) (x(r, f) <= t ? left : right)[y[r].index()]++;
      const double nl = std::accumulate(left.begin(), left.end(), 0);
      const double nr = std::accumulate(right.begin(), right.end(), 0);
      const double weighted = (nl * gini(left) + nr * gini(right)) / n;
      if (weighted < best - 1e-12) {
        best = weighted;
        found = true;
        best_feature = f;
        best_threshold = t;
      }
    }
  }
  if (parent > 0.0 && found) {
    node.leaf = false;
    node.feature = best_feature;
    node.threshold = best_threshold;
    std::vector<std::size_t> l, r;
    for (std::size_t row : rows) (x(row, best_feature) <= best_threshold ? l : r).push_back(row);
    nodes_[id] = node;
    const int left = build(x, y, l);
    const int right = build(x, y, r);
    nodes_[id].left = left;
    nodes_[id].right = right;
  } else {
    nodes_[id] = node;
  }
  return id;
}

ClassScores Cart::proportions(std::span<const double> query) const {
  int id = 0;
  while (!nodes_[id].leaf) id = query[nodes_[id].feature] <= nodes_[id].threshold ? nodes_[id].left : nodes_[id].right;
  const auto& counts = nodes_[id].counts;
  const double n = std::accumulate(counts.begin(), counts.end(), 0);
  ClassScores p{};
  for (std::size_t g = 0; g < 5; ++g) p[g] = counts[g] / n;
  return p;
}

double auroc_by_pairs(std::span<const double> positive_scores, std::span<const double> negative_scores) {
  double wins = 0.0;
  for (double p : positive_scores) {
    for (double q : negative_scores) wins += p > q ? 1.0 : (p == q ? 0.5 : 0.0);
  }
  return wins / static_cast<double>(positive_scores.size() * negative_scores.size());
}

double average_precision(std::span<const std::pair<bool, double>> items) {
  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return items[a].second > items[b].second; });
  double hits = 0.0;
  double sum = 0.0;
  for (std::size_t rank = 0; rank < order.size(); ++rank) {
    if (items[order[rank]].first) {
      hits += 1.0;
      sum += hits / static_cast<double>(rank + 1);
    }
  }
  return hits == 0.0 ? 0.0 : sum / hits;
}

}  // namespace oracle
