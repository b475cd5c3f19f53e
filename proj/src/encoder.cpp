#include "crh/encoder.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <string>

#include "crh/dataset.hpp"
#include "crh/errors.hpp"
#include "crh/io_detail.hpp"
#include "crh/rng.hpp"

namespace crh {

namespace {

constexpr double kSolverTolerance = 1e-10;  // relative singular value cutoff

void check_anchors(const AnchorSet& anchors) {
  const Index r = anchors.xhat.cols();
  if (r < 1) throw shape_error("anchor set is empty");
  if (anchors.ahat.count() != r)
    throw shape_error("anchor set has " + std::to_string(r) + " samples but " +
                      std::to_string(anchors.ahat.count()) + " codes");
  if (static_cast<Index>(anchors.source_indices.size()) != r)
    throw shape_error("anchor set has " + std::to_string(r) + " samples but " +
                      std::to_string(anchors.source_indices.size()) + " source indices");
}

}  // namespace

LshModel make_lsh_model(Index dim, Index m, std::uint64_t seed, double epsilon) {
  if (dim < 1) throw shape_error("projection dimension must be at least 1");
  if (m < 1) throw shape_error("code width must be at least 1, got " + std::to_string(m));
  Rng rng(seed);
  LshModel model;
  model.projections.resize(dim, m);
  for (Index j = 0; j < m; ++j)
    for (Index i = 0; i < dim; ++i) model.projections(i, j) = rng.gaussian();
  model.offsets = Eigen::VectorXd::Zero(m);
  model.threshold = epsilon;
  return model;
}

CodeMatrix lsh_encode(const LshModel& model, const DenseMatrix& x) {
  if (x.rows() != model.projections.rows())
    throw shape_error("data has dimension " + std::to_string(x.rows()) + ", model expects " +
                      std::to_string(model.projections.rows()));
  const Index m = model.projections.cols();
  CodeMatrix codes(m, x.cols());
  const DenseMatrix scores = model.projections.transpose() * x;  // m x n
  for (Index i = 0; i < x.cols(); ++i)
    for (Index j = 0; j < m; ++j)
      codes.set(i, j, scores(j, i) + model.offsets(j) >= model.threshold ? 1 : -1);
  return codes;
}

std::pair<LshModel, CodeMatrix> bootstrap_lsh(const DenseMatrix& x, Index m, std::uint64_t seed,
                                              double epsilon) {
  LshModel model = make_lsh_model(x.rows(), m, seed, epsilon);
  CodeMatrix codes = lsh_encode(model, x);
  return {std::move(model), std::move(codes)};
}

RelaxedSolver::RelaxedSolver(const AnchorSet& anchors) {
  check_anchors(anchors);
  bits_ = anchors.ahat.bits();
  anchor_count_ = anchors.ahat.count();
  ThinSvd svd = thin_svd(anchors.ahat.to_dense());
  u_ = std::move(svd.u);
  v_ = std::move(svd.v);
  inv_sigma_.resize(svd.s.size());
  const double tol = svd.s.size() > 0 ? kSolverTolerance * svd.s(0) : 0.0;
  for (Index i = 0; i < svd.s.size(); ++i)
    inv_sigma_(i) = svd.s(i) > tol ? 1.0 / svd.s(i) : 0.0;
}

Eigen::VectorXd RelaxedSolver::solve(const Eigen::VectorXd& g) const {
  if (g.size() != anchor_count_)
    throw shape_error("target vector has length " + std::to_string(g.size()) + ", expected " +
                      std::to_string(anchor_count_));
  if (!g.allFinite()) throw shape_error("target vector has non-finite entries");
  // m * U diag(1/sigma) V^T g
  return static_cast<double>(bits_) *
         (u_ * (inv_sigma_.asDiagonal() * (v_.transpose() * g)));
}

Eigen::VectorXd solve_relaxed(const AnchorSet& anchors, const Eigen::VectorXd& g) {
  return RelaxedSolver(anchors).solve(g);
}

Eigen::VectorXd binarize(const Eigen::VectorXd& s) {
  if (!s.allFinite()) throw shape_error("cannot binarize non-finite values");
  Eigen::VectorXd out(s.size());
  for (Index i = 0; i < s.size(); ++i) out(i) = s(i) >= 0.0 ? 1.0 : -1.0;
  return out;
}

CodeMatrix encode_batch(const DenseMatrix& corpus_x, const CodeMatrix& corpus_codes,
                        const DenseMatrix& y, const EncodeConfig& cfg, AnchorSet* anchors_out) {
  const Index corpus = corpus_x.cols();
  if (corpus == 0) throw shape_error("cannot encode against an empty corpus");
  if (corpus_codes.count() != corpus)
    throw shape_error("corpus has " + std::to_string(corpus) + " samples but " +
                      std::to_string(corpus_codes.count()) + " codes");
  if (y.rows() != corpus_x.rows())
    throw shape_error("batch has dimension " + std::to_string(y.rows()) + ", corpus has " +
                      std::to_string(corpus_x.rows()));
  if (cfg.m != corpus_codes.bits())
    throw shape_error("config requests " + std::to_string(cfg.m) + " bits but corpus codes have " +
                      std::to_string(corpus_codes.bits()));
  if (!(cfg.rho > 0.0 && cfg.rho <= 1.0))
    throw shape_error("anchor fraction must lie in (0, 1]");

  Rng rng(cfg.seed);
  const Index r =
      std::max<Index>(1, static_cast<Index>(std::llround(cfg.rho * static_cast<double>(corpus))));
  AnchorSet anchors;
  anchors.source_indices = to_indices(rng.sample_without_replacement(
      static_cast<std::size_t>(corpus), static_cast<std::size_t>(std::min(r, corpus))));
  anchors.xhat = gather_columns(corpus_x, anchors.source_indices);
  anchors.ahat = corpus_codes.select(anchors.source_indices);
  const std::uint64_t nystrom_seed = rng.next_raw();

  CodeMatrix out(cfg.m, y.cols());
  if (y.cols() > 0) {
    const Index c_eff = cfg.c > 0 ? cfg.c : 2 * cfg.m;
    const Index k_eff = cfg.k > 0 ? cfg.k : cfg.m;
    const NystromModel model =
        cfg.exact_columns ? build_model_exact(anchors.xhat, y, k_eff)
                          : build_model(anchors.xhat, y, k_eff, c_eff, nystrom_seed);
    const GramBlock g = approx_inner(model, y, anchors.xhat);  // queries x anchors

    const RelaxedSolver solver(anchors);
    for (Index i = 0; i < y.cols(); ++i)
      out.set_column(i, binarize(solver.solve(g.row(i).transpose())));
  }

  if (anchors_out != nullptr) *anchors_out = std::move(anchors);
  return out;
}

double objective_value(const CodeMatrix& s, const CodeMatrix& t, const GramBlock& g, Index m) {
  if (s.bits() != m || t.bits() != m)
    throw shape_error("objective expects " + std::to_string(m) + "-bit codes");
  if (g.rows() != s.count() || g.cols() != t.count())
    throw shape_error("objective target is " + std::to_string(g.rows()) + "x" +
                      std::to_string(g.cols()) + ", codes are " + std::to_string(s.count()) +
                      " and " + std::to_string(t.count()));
  const double inv_m = 1.0 / static_cast<double>(m);
  double total = 0.0;
  for (Index i = 0; i < s.count(); ++i) {
    for (Index j = 0; j < t.count(); ++j) {
      const double ip = static_cast<double>(m) - 2.0 * static_cast<double>(hamming(s, i, t, j));
      total += std::abs(inv_m * ip - g(i, j));
    }
  }
  return total;
}

double objective_value_squared(const CodeMatrix& s, const CodeMatrix& t, const GramBlock& g,
                               Index m) {
  if (s.bits() != m || t.bits() != m)
    throw shape_error("objective expects " + std::to_string(m) + "-bit codes");
  if (g.rows() != s.count() || g.cols() != t.count())
    throw shape_error("objective target is " + std::to_string(g.rows()) + "x" +
                      std::to_string(g.cols()) + ", codes are " + std::to_string(s.count()) +
                      " and " + std::to_string(t.count()));
  const double inv_m = 1.0 / static_cast<double>(m);
  double total = 0.0;
  for (Index i = 0; i < s.count(); ++i) {
    for (Index j = 0; j < t.count(); ++j) {
      const double ip = static_cast<double>(m) - 2.0 * static_cast<double>(hamming(s, i, t, j));
      const double dev = inv_m * ip - g(i, j);
      total += dev * dev;
    }
  }
  return total;
}

Eigen::VectorXd brute_force_encode(const AnchorSet& anchors, const Eigen::VectorXd& g) {
  check_anchors(anchors);
  const Index m = anchors.ahat.bits();
  if (m > 20)
    throw shape_error("enumeration is limited to 20 bits, got " + std::to_string(m));
  if (g.size() != anchors.ahat.count())
    throw shape_error("target vector has length " + std::to_string(g.size()) + ", expected " +
                      std::to_string(anchors.ahat.count()));
  const DenseMatrix t = anchors.ahat.to_dense();  // m x r
  const double inv_m = 1.0 / static_cast<double>(m);

  Eigen::VectorXd best;
  double best_obj = std::numeric_limits<double>::infinity();
  Eigen::VectorXd s(m);
  const std::uint64_t total = std::uint64_t{1} << m;
  for (std::uint64_t b = 0; b < total; ++b) {
    // Bit (m-1-j) of b decides entry j, so ascending b is lexicographic
    // order with +1 first.
    for (Index j = 0; j < m; ++j)
      s(j) = ((b >> (m - 1 - j)) & 1u) == 0 ? 1.0 : -1.0;
    const double obj = (inv_m * (t.transpose() * s) - g).cwiseAbs().sum();
    if (obj < best_obj) {
      best_obj = obj;
      best = s;
    }
  }
  return best;
}

void save_anchors(const AnchorSet& anchors, const std::string& stem) {
  check_anchors(anchors);
  save_dense(stem + ".xhat.rawf64", anchors.xhat);
  save_codes(stem + ".codes.bin", anchors.ahat);
  atomic_write_stream(stem + ".indices.csv", [&](std::ostream& out) {
    for (const Index idx : anchors.source_indices) out << idx << "\n";
  });
}

AnchorSet load_anchors(const std::string& stem) {
  AnchorSet anchors;
  anchors.xhat = load_dense(stem + ".xhat.rawf64", DenseFormat::rawf64);
  anchors.ahat = load_codes(stem + ".codes.bin");

  const std::string index_path = stem + ".indices.csv";
  std::ifstream in(index_path);
  if (!in) throw io_error("cannot open " + index_path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    char* end = nullptr;
    const long long value = std::strtoll(line.c_str(), &end, 10);
    if (end == line.c_str() || *end != '\0' || value < 0)
      throw io_error(index_path + ": line " + std::to_string(line_no) +
                     ": expected a nonnegative integer, got \"" + line + "\"");
    anchors.source_indices.push_back(static_cast<Index>(value));
  }
  check_anchors(anchors);
  if (anchors.ahat.count() != anchors.xhat.cols())
    throw io_error(stem + ": code count does not match sample count");
  return anchors;
}

}  // namespace crh
