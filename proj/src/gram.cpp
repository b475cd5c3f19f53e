#include "crh/gram.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <string>

#include "crh/errors.hpp"
#include "crh/rng.hpp"

namespace crh {

namespace {

constexpr double kRankTolerance = 1e-10;  // relative to the largest singular value

Index numerical_rank(const Eigen::VectorXd& s) {
  if (s.size() == 0) return 0;
  const double tol = kRankTolerance * s(0);
  Index r = 0;
  while (r < s.size() && s(r) > tol) ++r;
  return r;
}

NystromModel model_from_rescaled(const DenseMatrix& c_pi, Index k, ColumnSample sample) {
  if (k < 1) throw shape_error("target rank must be at least 1, got " + std::to_string(k));
  ThinSvd svd = thin_svd(c_pi);
  const Index r = std::min(k, numerical_rank(svd.s));
  if (r == 0) throw shape_error("sampled column matrix has rank 0");
  NystromModel model;
  model.basis = svd.u.leftCols(r);
  model.singular_values = svd.s.head(r);
  model.rank = r;
  model.sample = std::move(sample);
  return model;
}

DenseMatrix rescaled_columns(const DenseMatrix& pi, const ColumnSample& sample) {
  DenseMatrix c_pi = gather_columns(pi, sample.indices);
  for (Index t = 0; t < c_pi.cols(); ++t) c_pi.col(t) *= sample.rescale(t);
  return c_pi;
}

}  // namespace

Eigen::VectorXd sampling_probs(const DenseMatrix& pi) {
  if (pi.cols() == 0) throw shape_error("cannot compute sampling probabilities of an empty matrix");
  Eigen::VectorXd p(pi.cols());
  for (Index i = 0; i < pi.cols(); ++i) {
    const double g = pi.col(i).squaredNorm();  // G_ii = |pi_i|^2
    p(i) = g * g;
  }
  const double total = p.sum();
  if (!(total > 0.0))
    throw shape_error("all candidate columns are zero; sampling probabilities undefined");
  return p / total;
}

ColumnSample select_columns(const DenseMatrix& pi, Index c, std::uint64_t seed) {
  if (c < 1) throw shape_error("column sample size must be at least 1, got " + std::to_string(c));
  const Eigen::VectorXd p = sampling_probs(pi);

  Eigen::VectorXd cdf(p.size());
  double acc = 0.0;
  for (Index i = 0; i < p.size(); ++i) {
    acc += p(i);
    cdf(i) = acc;
  }
  cdf(p.size() - 1) = 1.0;  // guard against rounding shortfall

  Rng rng(seed);
  ColumnSample sample;
  sample.indices.resize(static_cast<std::size_t>(c));
  sample.rescale.resize(c);
  for (Index t = 0; t < c; ++t) {
    const double u = rng.uniform01();
    Index lo = 0, hi = p.size() - 1;
    while (lo < hi) {  // first index with cdf >= u
      const Index mid = lo + (hi - lo) / 2;
      if (cdf(mid) < u)
        lo = mid + 1;
      else
        hi = mid;
    }
    sample.indices[static_cast<std::size_t>(t)] = lo;
    sample.rescale(t) = 1.0 / std::sqrt(static_cast<double>(c) * p(lo));
  }
  return sample;
}

ColumnSample select_all_columns(const DenseMatrix& pi) {
  const Eigen::VectorXd p = sampling_probs(pi);
  ColumnSample sample;
  for (Index i = 0; i < p.size(); ++i) {
    if (p(i) > 0.0) sample.indices.push_back(i);
  }
  const Index c = static_cast<Index>(sample.indices.size());
  sample.rescale.resize(c);
  for (Index t = 0; t < c; ++t)
    sample.rescale(t) = 1.0 / std::sqrt(static_cast<double>(c) * p(sample.indices[static_cast<std::size_t>(t)]));
  return sample;
}

ThinSvd thin_svd(const DenseMatrix& m) {
  if (m.size() == 0) throw shape_error("cannot take the SVD of an empty matrix");
  if (!m.allFinite()) throw shape_error("matrix passed to SVD has non-finite entries");
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

NystromModel build_model(const DenseMatrix& xhat, const DenseMatrix& y, Index k, Index c,
                         std::uint64_t seed) {
  const DenseMatrix pi = hstack(xhat, y);
  ColumnSample sample = select_columns(pi, c, seed);
  const DenseMatrix c_pi = rescaled_columns(pi, sample);
  return model_from_rescaled(c_pi, k, std::move(sample));
}

NystromModel build_model_from_sample(const DenseMatrix& xhat, const DenseMatrix& y, Index k,
                                     const ColumnSample& sample) {
  const DenseMatrix pi = hstack(xhat, y);
  if (sample.size() == 0) throw shape_error("column sample is empty");
  if (sample.rescale.size() != sample.size())
    throw shape_error("column sample has mismatched rescale length");
  const DenseMatrix c_pi = rescaled_columns(pi, sample);
  return model_from_rescaled(c_pi, k, sample);
}

NystromModel build_model_exact(const DenseMatrix& xhat, const DenseMatrix& y, Index k) {
  const DenseMatrix pi = hstack(xhat, y);
  ColumnSample sample = select_all_columns(pi);
  const DenseMatrix c_pi = rescaled_columns(pi, sample);
  return model_from_rescaled(c_pi, k, std::move(sample));
}

GramBlock approx_inner(const NystromModel& model, const DenseMatrix& a, const DenseMatrix& b) {
  if (model.rank == 0) throw shape_error("model has rank 0");
  const Index d = model.basis.rows();
  if (a.rows() != d)
    throw shape_error("left matrix has " + std::to_string(a.rows()) + " rows, model expects " +
                      std::to_string(d));
  if (b.rows() != d)
    throw shape_error("right matrix has " + std::to_string(b.rows()) + " rows, model expects " +
                      std::to_string(d));
  const DenseMatrix pa = model.basis.transpose() * a;
  const DenseMatrix pb = model.basis.transpose() * b;
  return pa.transpose() * pb;
}

}  // namespace crh
