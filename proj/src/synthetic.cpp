#include "crh/synthetic.hpp"

#include <string>

#include "crh/errors.hpp"
#include "crh/rng.hpp"

namespace crh {

ClusterData make_clusters(Index dim, Index n, Index n_clusters, double noise,
                          std::uint64_t seed) {
  if (dim < 1) throw shape_error("cluster dimension must be at least 1");
  if (n < 1) throw shape_error("sample count must be at least 1");
  if (n_clusters < 1 || n_clusters > n)
    throw shape_error("cluster count " + std::to_string(n_clusters) + " must lie in [1, " +
                      std::to_string(n) + "]");
  if (noise < 0.0) throw shape_error("noise level must be nonnegative");

  Rng rng(seed);
  ClusterData data;
  data.centers.resize(dim, n_clusters);
  for (Index j = 0; j < n_clusters; ++j)
    for (Index i = 0; i < dim; ++i) data.centers(i, j) = rng.gaussian();

  data.x.resize(dim, n);
  data.labels.resize(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) {
    const Index cluster = j % n_clusters;
    data.labels[static_cast<std::size_t>(j)] = cluster;
    for (Index i = 0; i < dim; ++i)
      data.x(i, j) = data.centers(i, cluster) + noise * rng.gaussian();
  }
  return data;
}

DenseMatrix make_low_rank(Index dim, Index n, Index rank, std::uint64_t seed) {
  if (dim < 1 || n < 1) throw shape_error("matrix dimensions must be at least 1");
  if (rank < 1) throw shape_error("rank must be at least 1");

  Rng rng(seed);
  DenseMatrix b(dim, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < dim; ++i) b(i, j) = rng.gaussian();
  DenseMatrix c(rank, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < rank; ++i) c(i, j) = rng.gaussian();
  return b * c;
}

}  // namespace crh
