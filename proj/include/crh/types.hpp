#pragma once

#include <Eigen/Dense>
#include <vector>

#include "crh/errors.hpp"

namespace crh {

// Column-major real matrix; columns are samples (d features x n samples).
using DenseMatrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline DenseMatrix hstack(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() > 0 && b.cols() > 0 && a.rows() != b.rows())
    throw shape_error("hstack: row counts differ (" + std::to_string(a.rows()) +
                      " vs " + std::to_string(b.rows()) + ")");
  Index rows = a.cols() > 0 ? a.rows() : b.rows();
  DenseMatrix out(rows, a.cols() + b.cols());
  if (a.cols() > 0) out.leftCols(a.cols()) = a;
  if (b.cols() > 0) out.rightCols(b.cols()) = b;
  return out;
}

inline std::vector<Index> to_indices(const std::vector<std::size_t>& v) {
  std::vector<Index> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = static_cast<Index>(v[i]);
  return out;
}

inline DenseMatrix gather_columns(const DenseMatrix& m, const std::vector<Index>& idx) {
  DenseMatrix out(m.rows(), static_cast<Index>(idx.size()));
  for (std::size_t t = 0; t < idx.size(); ++t) {
    if (idx[t] < 0 || idx[t] >= m.cols())
      throw shape_error("gather_columns: index " + std::to_string(idx[t]) +
                        " out of range [0, " + std::to_string(m.cols()) + ")");
    out.col(static_cast<Index>(t)) = m.col(idx[t]);
  }
  return out;
}

}  // namespace crh
