#pragma once

#include <cstdint>
#include <vector>

#include "crh/types.hpp"

namespace crh {

// Approximate inner products; rows index A's columns, cols index B's.
using GramBlock = Eigen::MatrixXd;

// Columns drawn from Pi (duplicates allowed) with the diagonal rescaling
// 1/sqrt(c * p_i) that keeps the sampled Gram estimator unbiased.
struct ColumnSample {
  std::vector<Index> indices;
  Eigen::VectorXd rescale;
  Index size() const { return static_cast<Index>(indices.size()); }
};

struct ThinSvd {
  Eigen::MatrixXd u;  // orthonormal columns
  Eigen::VectorXd s;  // nonincreasing, >= 0
  Eigen::MatrixXd v;  // orthonormal columns
};

// Rank-k projection basis built from randomly selected, rescaled columns
// of Pi = [Xhat Y].
struct NystromModel {
  Eigen::MatrixXd basis;             // d x k, orthonormal columns
  Eigen::VectorXd singular_values;   // length k, nonincreasing
  Index rank = 0;                    // k after clipping to numerical rank
  ColumnSample sample;
};

// p_i proportional to the squared diagonal of the Gram matrix:
// p_i = |pi_i|^4 / sum_j |pi_j|^4.
Eigen::VectorXd sampling_probs(const DenseMatrix& pi);

// c i.i.d. draws with replacement from sampling_probs(pi).
ColumnSample select_columns(const DenseMatrix& pi, Index c, std::uint64_t seed);

// Every column with nonzero sampling probability, once, with the same
// rescaling formula. The no-subsampling limit used for exactness checks.
ColumnSample select_all_columns(const DenseMatrix& pi);

ThinSvd thin_svd(const DenseMatrix& m);

NystromModel build_model(const DenseMatrix& xhat, const DenseMatrix& y, Index k, Index c,
                         std::uint64_t seed);
NystromModel build_model_from_sample(const DenseMatrix& xhat, const DenseMatrix& y, Index k,
                                     const ColumnSample& sample);
NystromModel build_model_exact(const DenseMatrix& xhat, const DenseMatrix& y, Index k);

// Entry (i,j) = (U_k^T a_i) . (U_k^T b_j).
GramBlock approx_inner(const NystromModel& model, const DenseMatrix& a, const DenseMatrix& b);

}  // namespace crh
