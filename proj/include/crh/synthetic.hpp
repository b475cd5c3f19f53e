#pragma once

#include <cstdint>
#include <vector>

#include "crh/types.hpp"

namespace crh {

struct ClusterData {
  DenseMatrix x;               // d x n, column i belongs to cluster i % n_clusters
  DenseMatrix centers;         // d x n_clusters
  std::vector<Index> labels;   // length n
};

// Gaussian blobs: centers i.i.d. standard normal, points center + noise * N(0, I).
// Round-robin assignment keeps every cluster populated for any n.
ClusterData make_clusters(Index dim, Index n, Index n_clusters, double noise,
                          std::uint64_t seed);

// X = B * C with B (dim x rank) and C (rank x n) standard normal, so
// rank(X) = min(dim, rank, n) almost surely.
DenseMatrix make_low_rank(Index dim, Index n, Index rank, std::uint64_t seed);

}  // namespace crh
