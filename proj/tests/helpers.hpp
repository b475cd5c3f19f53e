#pragma once

// Independent oracles for the test suite. Each is the plainest possible
// implementation of its contract, sharing no code with the library paths it
// checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "crh/codes.hpp"
#include "crh/encoder.hpp"
#include "crh/rng.hpp"
#include "crh/types.hpp"

namespace testing_oracles {

// Entry (i,j) = a_i . b_j by explicit triple loop.
inline crh::DenseMatrix exact_gram(const crh::DenseMatrix& a, const crh::DenseMatrix& b) {
  crh::DenseMatrix g(a.cols(), b.cols());
  for (crh::Index i = 0; i < a.cols(); ++i) {
    for (crh::Index j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (crh::Index k = 0; k < a.rows(); ++k) acc += a(k, i) * b(k, j);
      g(i, j) = acc;
    }
  }
  return g;
}

// Hamming distance via per-entry comparison, no bit tricks.
inline int loop_hamming(const crh::CodeMatrix& a, crh::Index i, const crh::CodeMatrix& b,
                        crh::Index j) {
  int count = 0;
  for (crh::Index t = 0; t < a.bits(); ++t)
    if (a.get(i, t) != b.get(j, t)) ++count;
  return count;
}

// Exact k nearest neighbors from a fully materialized distance matrix,
// distances computed per pair with an explicit loop.
inline std::vector<std::vector<crh::Index>> brute_knn(const crh::DenseMatrix& base,
                                                      const crh::DenseMatrix& queries,
                                                      crh::Index k) {
  std::vector<std::vector<crh::Index>> out;
  for (crh::Index q = 0; q < queries.cols(); ++q) {
    std::vector<std::pair<double, crh::Index>> dist;
    for (crh::Index i = 0; i < base.cols(); ++i) {
      double acc = 0.0;
      for (crh::Index d = 0; d < base.rows(); ++d) {
        const double diff = base(d, i) - queries(d, q);
        acc += diff * diff;
      }
      dist.emplace_back(std::sqrt(acc), i);
    }
    std::sort(dist.begin(), dist.end());
    std::vector<crh::Index> list;
    for (crh::Index i = 0; i < k; ++i) list.push_back(dist[static_cast<std::size_t>(i)].second);
    out.push_back(std::move(list));
  }
  return out;
}

// AP recomputed the slow way: at every relevant rank, count the hits in the
// prefix from scratch.
inline double ap_recompute(const std::vector<crh::Index>& ranked,
                           const std::vector<crh::Index>& truth) {
  double total = 0.0;
  for (std::size_t p = 0; p < ranked.size(); ++p) {
    const bool relevant =
        std::find(truth.begin(), truth.end(), ranked[p]) != truth.end();
    if (!relevant) continue;
    int hits = 0;
    for (std::size_t q = 0; q <= p; ++q)
      if (std::find(truth.begin(), truth.end(), ranked[q]) != truth.end()) ++hits;
    total += static_cast<double>(hits) / static_cast<double>(p + 1);
  }
  return total / static_cast<double>(truth.size());
}

inline crh::CodeMatrix random_codes(crh::Rng& rng, crh::Index m, crh::Index n) {
  crh::CodeMatrix codes(m, n);
  for (crh::Index i = 0; i < n; ++i)
    for (crh::Index j = 0; j < m; ++j) codes.set(i, j, rng.uniform01() < 0.5 ? 1 : -1);
  return codes;
}

// Anchors whose data ARE their codes scaled by 1/sqrt(m), so the code inner
// products reproduce the data inner products exactly and rank(Ahat) = m can
// be enforced. The ideal-hashing fixture for recovery tests.
inline crh::AnchorSet ideal_anchors(std::uint64_t seed, crh::Index m, crh::Index r) {
  if (r < m) throw std::runtime_error("ideal_anchors: need r >= m for full rank");
  for (std::uint64_t attempt = 0; attempt < 100; ++attempt) {
    crh::Rng rng(seed + attempt * 1315423911ull);
    crh::CodeMatrix codes = random_codes(rng, m, r);
    const crh::DenseMatrix dense = codes.to_dense();
    const Eigen::JacobiSVD<crh::DenseMatrix> svd(dense);
    const Eigen::VectorXd s = svd.singularValues();
    if (s.size() < m || s(s.size() - 1) <= 1e-8 * s(0)) continue;
    crh::AnchorSet anchors;
    anchors.ahat = codes;
    anchors.xhat = dense / std::sqrt(static_cast<double>(m));
    anchors.source_indices.resize(static_cast<std::size_t>(r));
    for (crh::Index i = 0; i < r; ++i) anchors.source_indices[static_cast<std::size_t>(i)] = i;
    return anchors;
  }
  throw std::runtime_error("ideal_anchors: no full-rank code draw found");
}

class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    std::mt19937_64 gen(std::random_device{}());
    for (int i = 0; i < 100; ++i) {
      auto candidate = base / ("crh_test_" + std::to_string(gen()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = candidate;
        return;
      }
    }
    throw std::runtime_error("cannot create temp directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace testing_oracles
