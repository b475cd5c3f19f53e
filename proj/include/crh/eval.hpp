#pragma once

#include <cstdint>
#include <vector>

#include "crh/codes.hpp"
#include "crh/types.hpp"

namespace crh {

// Exact Euclidean k nearest neighbors per query, ascending distance, ties by
// ascending base index.
struct GroundTruth {
  std::vector<std::vector<Index>> neighbors;  // one sorted-by-rank list per query
  Index k = 0;
};

struct PrPoint {
  double recall = 0.0;
  double precision = 0.0;
};

struct EvalReport {
  double map = 0.0;
  std::vector<double> per_query_ap;
  std::vector<PrPoint> pr_points;  // one per rank cut, averaged over queries
  // config echo
  Index bits = 0;
  Index neighbors = 0;
  std::uint64_t seed = 0;
};

GroundTruth knn_ground_truth(const DenseMatrix& base, const DenseMatrix& queries, Index k);

// Base indices sorted by ascending Hamming distance to the query, ties by
// ascending base index.
std::vector<Index> rank_by_hamming(const CodeMatrix& base, const CodeMatrix& queries,
                                   Index query);

// Uninterpolated AP: mean over hit positions p of (hits up to p) / p,
// normalized by |truth|.
double average_precision(const std::vector<Index>& ranked, const std::vector<Index>& truth);

EvalReport mean_ap(const CodeMatrix& base_codes, const CodeMatrix& query_codes,
                   const GroundTruth& truth);

// Precision and recall at every rank cut 1..base_size, averaged over queries.
std::vector<PrPoint> pr_curve(const CodeMatrix& base_codes, const CodeMatrix& query_codes,
                              const GroundTruth& truth);

// Area under a PR curve by trapezoid over recall, anchored at recall 0 with
// the first point's precision.
double pr_auc(const std::vector<PrPoint>& points);

}  // namespace crh
