#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "crh/codes.hpp"
#include "crh/gram.hpp"
#include "crh/types.hpp"

namespace crh {

// Random-projection hash: bit k of x is +1 iff projections.col(k) . x + offsets(k) >= threshold.
struct LshModel {
  DenseMatrix projections;  // d x m
  Eigen::VectorXd offsets;  // length m
  double threshold = 0.0;
};

// Coded subset the linear system is solved against.
struct AnchorSet {
  DenseMatrix xhat;                   // d x r, normalized samples
  CodeMatrix ahat;                    // m x r codes
  std::vector<Index> source_indices;  // positions in the corpus, length r
};

struct EncodeConfig {
  Index m = 16;
  double rho = 0.09;   // anchor fraction of the corpus
  Index c = 0;         // Nystrom columns; 0 means 2*m
  Index k = 0;         // Nystrom rank; 0 means m
  std::uint64_t seed = 0;
  bool exact_columns = false;  // use every Pi column once instead of sampling c
};

LshModel make_lsh_model(Index dim, Index m, std::uint64_t seed, double epsilon = 0.0);
CodeMatrix lsh_encode(const LshModel& model, const DenseMatrix& x);

// Initial codes for the first corpus: zero offsets, threshold epsilon.
std::pair<LshModel, CodeMatrix> bootstrap_lsh(const DenseMatrix& x, Index m, std::uint64_t seed,
                                              double epsilon = 0.0);

// Least-squares machinery for min_s |(1/m) Ahat^T s - g|_2, shared across the
// queries of one batch. Solution s = m * pinv(Ahat Ahat^T) Ahat g via the SVD
// of Ahat with 1e-10 * sigma_max truncation.
class RelaxedSolver {
 public:
  explicit RelaxedSolver(const AnchorSet& anchors);
  Eigen::VectorXd solve(const Eigen::VectorXd& g) const;
  Index bits() const { return bits_; }
  Index anchor_count() const { return anchor_count_; }

 private:
  Eigen::MatrixXd u_;          // m x p
  Eigen::MatrixXd v_;          // r x p
  Eigen::VectorXd inv_sigma_;  // length p, zero where truncated
  Index bits_ = 0;
  Index anchor_count_ = 0;
};

Eigen::VectorXd solve_relaxed(const AnchorSet& anchors, const Eigen::VectorXd& g);

// Entrywise sign into {-1,+1}; sign(0) = +1.
Eigen::VectorXd binarize(const Eigen::VectorXd& s);

// Encode the columns of y against an accumulated coded corpus. Draws
// r = max(1, round(rho * corpus)) distinct anchors, builds the Nystrom model
// on [Xhat y], then solves and signs each query independently. Deterministic
// for a fixed cfg.seed. Optionally reports the anchors it drew.
CodeMatrix encode_batch(const DenseMatrix& corpus_x, const CodeMatrix& corpus_codes,
                        const DenseMatrix& y, const EncodeConfig& cfg,
                        AnchorSet* anchors_out = nullptr);

// Sum_ij |(1/m) s_i^T t_j - g_ij|: the absolute-deviation objective. Rows of g
// index codes of s, columns index codes of t.
double objective_value(const CodeMatrix& s, const CodeMatrix& t, const GramBlock& g, Index m);
// Same double sum with squared deviations, the surrogate the relaxed solver minimizes.
double objective_value_squared(const CodeMatrix& s, const CodeMatrix& t, const GramBlock& g,
                               Index m);

// Exact minimizer of sum_j |(1/m) s^T t_j - g_j| by enumeration, m <= 20.
// Ties broken lexicographically with +1 before -1.
Eigen::VectorXd brute_force_encode(const AnchorSet& anchors, const Eigen::VectorXd& g);

// Anchors persist as three files: <stem>.xhat.rawf64, <stem>.codes.bin,
// <stem>.indices.csv (one corpus index per line).
void save_anchors(const AnchorSet& anchors, const std::string& stem);
AnchorSet load_anchors(const std::string& stem);

}  // namespace crh
