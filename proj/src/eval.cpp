#include "crh/eval.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

#include "crh/errors.hpp"

namespace crh {

namespace {

void check_code_pair(const CodeMatrix& base, const CodeMatrix& queries) {
  if (base.bits() != queries.bits())
    throw shape_error("base codes have " + std::to_string(base.bits()) +
                      " bits, query codes have " + std::to_string(queries.bits()));
  if (base.count() == 0) throw shape_error("base code set is empty");
}

void check_truth(const GroundTruth& truth, Index n_queries, Index n_base) {
  if (static_cast<Index>(truth.neighbors.size()) != n_queries)
    throw shape_error("ground truth covers " + std::to_string(truth.neighbors.size()) +
                      " queries, codes have " + std::to_string(n_queries));
  for (const auto& list : truth.neighbors) {
    if (list.empty()) throw shape_error("ground truth has an empty neighbor list");
    for (const Index idx : list) {
      if (idx < 0 || idx >= n_base)
        throw shape_error("ground truth index " + std::to_string(idx) + " is out of range");
    }
  }
}

}  // namespace

GroundTruth knn_ground_truth(const DenseMatrix& base, const DenseMatrix& queries, Index k) {
  if (base.rows() != queries.rows())
    throw shape_error("base has dimension " + std::to_string(base.rows()) + ", queries have " +
                      std::to_string(queries.rows()));
  if (k < 1 || k > base.cols())
    throw shape_error("neighbor count " + std::to_string(k) + " must lie in [1, " +
                      std::to_string(base.cols()) + "]");

  GroundTruth truth;
  truth.k = k;
  truth.neighbors.resize(static_cast<std::size_t>(queries.cols()));

  const Eigen::VectorXd base_sq = base.colwise().squaredNorm();
  std::vector<std::pair<double, Index>> order(static_cast<std::size_t>(base.cols()));
  for (Index q = 0; q < queries.cols(); ++q) {
    // |b - y|^2 = |b|^2 - 2 b.y + |y|^2; the |y|^2 term does not affect order.
    const Eigen::VectorXd dots = base.transpose() * queries.col(q);
    for (Index i = 0; i < base.cols(); ++i)
      order[static_cast<std::size_t>(i)] = {base_sq(i) - 2.0 * dots(i), i};
    std::partial_sort(order.begin(), order.begin() + k, order.end());
    auto& list = truth.neighbors[static_cast<std::size_t>(q)];
    list.resize(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) list[static_cast<std::size_t>(i)] = order[static_cast<std::size_t>(i)].second;
  }
  return truth;
}

std::vector<Index> rank_by_hamming(const CodeMatrix& base, const CodeMatrix& queries,
                                   Index query) {
  check_code_pair(base, queries);
  if (query < 0 || query >= queries.count())
    throw shape_error("query index " + std::to_string(query) + " is out of range");
  std::vector<std::pair<std::uint32_t, Index>> order(static_cast<std::size_t>(base.count()));
  for (Index i = 0; i < base.count(); ++i)
    order[static_cast<std::size_t>(i)] = {
        static_cast<std::uint32_t>(hamming(queries, query, base, i)), i};
  std::sort(order.begin(), order.end());
  std::vector<Index> ranked(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) ranked[i] = order[i].second;
  return ranked;
}

double average_precision(const std::vector<Index>& ranked, const std::vector<Index>& truth) {
  if (truth.empty()) throw shape_error("average precision needs a nonempty truth set");
  const std::unordered_set<Index> relevant(truth.begin(), truth.end());
  double sum = 0.0;
  std::size_t hits = 0;
  for (std::size_t p = 0; p < ranked.size(); ++p) {
    if (relevant.count(ranked[p]) != 0) {
      ++hits;
      sum += static_cast<double>(hits) / static_cast<double>(p + 1);
    }
  }
  return sum / static_cast<double>(relevant.size());
}

EvalReport mean_ap(const CodeMatrix& base_codes, const CodeMatrix& query_codes,
                   const GroundTruth& truth) {
  check_code_pair(base_codes, query_codes);
  check_truth(truth, query_codes.count(), base_codes.count());

  EvalReport report;
  report.bits = base_codes.bits();
  report.neighbors = truth.k;
  report.per_query_ap.resize(static_cast<std::size_t>(query_codes.count()));
  for (Index q = 0; q < query_codes.count(); ++q) {
    const std::vector<Index> ranked = rank_by_hamming(base_codes, query_codes, q);
    report.per_query_ap[static_cast<std::size_t>(q)] =
        average_precision(ranked, truth.neighbors[static_cast<std::size_t>(q)]);
  }
  report.map = report.per_query_ap.empty()
                   ? 0.0
                   : std::accumulate(report.per_query_ap.begin(), report.per_query_ap.end(), 0.0) /
                         static_cast<double>(report.per_query_ap.size());
  report.pr_points = pr_curve(base_codes, query_codes, truth);
  return report;
}

std::vector<PrPoint> pr_curve(const CodeMatrix& base_codes, const CodeMatrix& query_codes,
                              const GroundTruth& truth) {
  check_code_pair(base_codes, query_codes);
  check_truth(truth, query_codes.count(), base_codes.count());

  const std::size_t cuts = static_cast<std::size_t>(base_codes.count());
  std::vector<double> recall_sum(cuts, 0.0);
  std::vector<double> precision_sum(cuts, 0.0);
  for (Index q = 0; q < query_codes.count(); ++q) {
    const std::vector<Index> ranked = rank_by_hamming(base_codes, query_codes, q);
    const auto& list = truth.neighbors[static_cast<std::size_t>(q)];
    const std::unordered_set<Index> relevant(list.begin(), list.end());
    std::size_t hits = 0;
    for (std::size_t p = 0; p < cuts; ++p) {
      if (relevant.count(ranked[p]) != 0) ++hits;
      recall_sum[p] += static_cast<double>(hits) / static_cast<double>(relevant.size());
      precision_sum[p] += static_cast<double>(hits) / static_cast<double>(p + 1);
    }
  }

  const double n_q = static_cast<double>(query_codes.count());
  std::vector<PrPoint> points(cuts);
  for (std::size_t p = 0; p < cuts; ++p)
    points[p] = {recall_sum[p] / n_q, precision_sum[p] / n_q};
  return points;
}

double pr_auc(const std::vector<PrPoint>& points) {
  if (points.empty()) return 0.0;
  double area = 0.0;
  double prev_recall = 0.0;
  double prev_precision = points.front().precision;
  for (const PrPoint& pt : points) {
    area += (pt.recall - prev_recall) * 0.5 * (pt.precision + prev_precision);
    prev_recall = pt.recall;
    prev_precision = pt.precision;
  }
  return area;
}

}  // namespace crh
