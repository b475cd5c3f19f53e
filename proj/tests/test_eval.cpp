#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "crh/encoder.hpp"
#include "crh/errors.hpp"
#include "crh/eval.hpp"
#include "crh/rng.hpp"
#include "crh/types.hpp"
#include "helpers.hpp"

using testing_oracles::ap_recompute;
using testing_oracles::brute_knn;
using testing_oracles::random_codes;

namespace {

crh::DenseMatrix gaussian_matrix(std::uint64_t seed, crh::Index d, crh::Index n) {
  crh::Rng rng(seed);
  crh::DenseMatrix m(d, n);
  for (crh::Index j = 0; j < n; ++j)
    for (crh::Index i = 0; i < d; ++i) m(i, j) = rng.gaussian();
  return m;
}

}  // namespace

TEST_CASE("knn_ground_truth matches the explicit distance-matrix oracle") {
  const crh::DenseMatrix base = gaussian_matrix(1, 8, 200);
  const crh::DenseMatrix queries = gaussian_matrix(2, 8, 50);
  const crh::GroundTruth truth = crh::knn_ground_truth(base, queries, 10);
  REQUIRE(truth.k == 10);
  REQUIRE(truth.neighbors.size() == 50);
  const auto oracle = brute_knn(base, queries, 10);
  for (std::size_t q = 0; q < 50; ++q) CHECK(truth.neighbors[q] == oracle[q]);
}

TEST_CASE("knn ties break toward the lower base index") {
  crh::DenseMatrix base(1, 3);
  base << 1.0, -1.0, 1.0;  // base 0 and 2 are equidistant from the query
  crh::DenseMatrix query(1, 1);
  query << 0.0;
  const auto truth = crh::knn_ground_truth(base, query, 3);
  CHECK(truth.neighbors[0] == std::vector<crh::Index>({0, 1, 2}));
}

TEST_CASE("knn_ground_truth validates its request") {
  const crh::DenseMatrix base = gaussian_matrix(3, 4, 10);
  const crh::DenseMatrix queries = gaussian_matrix(4, 4, 2);
  CHECK_THROWS_AS(crh::knn_ground_truth(base, queries, 11), crh::shape_error);
  CHECK_THROWS_AS(crh::knn_ground_truth(base, queries, 0), crh::shape_error);
  CHECK_THROWS_AS(crh::knn_ground_truth(base, gaussian_matrix(5, 3, 2), 2), crh::shape_error);
}

TEST_CASE("rank_by_hamming sorts by distance with index ties ascending") {
  // Base codes: 000, 011, 110, 000 against query 000 (as -1 bits).
  crh::CodeMatrix base(3, 4);
  base.set(1, 1, +1);
  base.set(1, 2, +1);
  base.set(2, 0, +1);
  base.set(2, 1, +1);
  crh::CodeMatrix query(3, 1);
  const auto ranked = crh::rank_by_hamming(base, query, 0);
  CHECK(ranked == std::vector<crh::Index>({0, 3, 1, 2}));
}

TEST_CASE("average_precision reproduces the worked example and the slow recompute") {
  // Relevant at ranks 1 and 3 of three truths: (1/1 + 2/3)/3 = 5/9.
  const std::vector<crh::Index> ranked = {7, 4, 9, 2};
  const std::vector<crh::Index> truth = {7, 9, 5};
  CHECK(crh::average_precision(ranked, truth) == doctest::Approx(5.0 / 9.0).epsilon(1e-12));

  // Pattern hit, miss, hit over two truths: (1 + 2/3)/2 = 5/6.
  CHECK(crh::average_precision({1, 8, 2}, {1, 2}) == doctest::Approx(5.0 / 6.0).epsilon(1e-12));

  crh::Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<crh::Index> order(30);
    for (crh::Index i = 0; i < 30; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[static_cast<std::size_t>(rng.bounded(i))]);
    const std::vector<crh::Index> t(order.begin(), order.begin() + 8);
    std::vector<crh::Index> r(order.begin(), order.end());
    for (std::size_t i = r.size(); i > 1; --i)
      std::swap(r[i - 1], r[static_cast<std::size_t>(rng.bounded(i))]);
    CHECK(crh::average_precision(r, t) == doctest::Approx(ap_recompute(r, t)).epsilon(1e-12));
  }
}

TEST_CASE("perfect codes give mAP 1") {
  // Queries are duplicates of base points, codes included, with k=1 truth
  // being the duplicated point itself.
  crh::Rng rng(23);
  const crh::CodeMatrix base = random_codes(rng, 16, 40);
  std::vector<crh::Index> picks = {5, 17, 33};
  const crh::CodeMatrix queries = base.select(picks);
  crh::GroundTruth truth;
  truth.k = 1;
  for (const auto p : picks) truth.neighbors.push_back({p});
  const crh::EvalReport report = crh::mean_ap(base, queries, truth);
  // A duplicate could still be out-ranked by an identical code elsewhere;
  // with 16 random bits over 40 codes that does not happen.
  CHECK(report.map == doctest::Approx(1.0));
  REQUIRE(report.per_query_ap.size() == 3);
  for (const double ap : report.per_query_ap) CHECK(ap == doctest::Approx(1.0));
}

TEST_CASE("mAP is the mean of per-query APs and sits in [0,1]") {
  crh::Rng rng(29);
  const crh::CodeMatrix base = random_codes(rng, 8, 60);
  const crh::CodeMatrix queries = random_codes(rng, 8, 15);
  const crh::DenseMatrix base_x = gaussian_matrix(31, 6, 60);
  const crh::DenseMatrix query_x = gaussian_matrix(32, 6, 15);
  const crh::GroundTruth truth = crh::knn_ground_truth(base_x, query_x, 12);
  const crh::EvalReport report = crh::mean_ap(base, queries, truth);
  REQUIRE(report.per_query_ap.size() == 15);
  double mean = 0.0;
  for (const double ap : report.per_query_ap) {
    CHECK(ap >= 0.0);
    CHECK(ap <= 1.0);
    mean += ap;
  }
  CHECK(report.map == doctest::Approx(mean / 15.0).epsilon(1e-12));

  // Each per-query AP matches the standalone scorer on the same ranking.
  for (crh::Index q = 0; q < 15; ++q) {
    const auto ranked = crh::rank_by_hamming(base, queries, q);
    CHECK(report.per_query_ap[static_cast<std::size_t>(q)] ==
          doctest::Approx(crh::average_precision(ranked, truth.neighbors[static_cast<std::size_t>(q)]))
              .epsilon(1e-12));
  }
}

TEST_CASE("mAP is invariant under reordering the queries") {
  crh::Rng rng(37);
  const crh::CodeMatrix base = random_codes(rng, 12, 30);
  const crh::CodeMatrix queries = random_codes(rng, 12, 8);
  const crh::DenseMatrix base_x = gaussian_matrix(38, 5, 30);
  const crh::DenseMatrix query_x = gaussian_matrix(39, 5, 8);
  const crh::GroundTruth truth = crh::knn_ground_truth(base_x, query_x, 6);

  // Reverse the query order everywhere; the mean over queries cannot move.
  std::vector<crh::Index> perm(8);
  for (crh::Index i = 0; i < 8; ++i) perm[static_cast<std::size_t>(i)] = 7 - i;
  const crh::CodeMatrix queries_rev = queries.select(perm);
  crh::GroundTruth truth_rev;
  truth_rev.k = 6;
  for (std::size_t q = 0; q < 8; ++q) truth_rev.neighbors.push_back(truth.neighbors[7 - q]);

  const crh::EvalReport original = crh::mean_ap(base, queries, truth);
  const crh::EvalReport reordered = crh::mean_ap(base, queries_rev, truth_rev);
  CHECK(reordered.map == doctest::Approx(original.map).epsilon(1e-12));
  REQUIRE(reordered.per_query_ap.size() == original.per_query_ap.size());
  for (std::size_t q = 0; q < 8; ++q)
    CHECK(reordered.per_query_ap[q] == original.per_query_ap[7 - q]);
}

TEST_CASE("one-bit random codes score close to the random-ranking baseline") {
  // With m=1 nearly all ranking is tie-broken by index, so mAP approaches the
  // expected AP of a random permutation, about k/n for k-of-n relevant.
  crh::Rng rng(41);
  const crh::Index n = 2000, k = 100;
  const crh::CodeMatrix base = random_codes(rng, 1, n);
  const crh::CodeMatrix queries = random_codes(rng, 1, 50);
  crh::GroundTruth truth;
  truth.k = k;
  for (crh::Index q = 0; q < 50; ++q) {
    std::vector<crh::Index> t;
    for (const auto v : rng.sample_without_replacement(static_cast<std::size_t>(n),
                                                       static_cast<std::size_t>(k)))
      t.push_back(static_cast<crh::Index>(v));
    truth.neighbors.push_back(std::move(t));
  }
  const double map = crh::mean_ap(base, queries, truth).map;
  CHECK(std::abs(map - static_cast<double>(k) / static_cast<double>(n)) < 0.02);
}

TEST_CASE("pr_curve recall is nondecreasing and ends at 1") {
  crh::Rng rng(43);
  const crh::CodeMatrix base = random_codes(rng, 10, 50);
  const crh::CodeMatrix queries = random_codes(rng, 10, 10);
  const crh::DenseMatrix base_x = gaussian_matrix(44, 4, 50);
  const crh::DenseMatrix query_x = gaussian_matrix(45, 4, 10);
  const crh::GroundTruth truth = crh::knn_ground_truth(base_x, query_x, 8);
  const auto points = crh::pr_curve(base, queries, truth);
  REQUIRE(points.size() == 50);
  for (std::size_t i = 0; i < points.size(); ++i) {
    CHECK(points[i].recall >= (i ? points[i - 1].recall : 0.0));
    CHECK(points[i].precision >= 0.0);
    CHECK(points[i].precision <= 1.0);
  }
  CHECK(points.back().recall == doctest::Approx(1.0));
  // Precision at the final cut is k/n by construction.
  CHECK(points.back().precision == doctest::Approx(8.0 / 50.0));

  // First point: precision at rank 1 is hit-or-miss per query; recall is
  // precision/k there.
  CHECK(points.front().recall == doctest::Approx(points.front().precision / 8.0));
}

TEST_CASE("pr_auc integrates hand-built curves") {
  // Constant precision 0.5 over recall 0..1: area 0.5.
  std::vector<crh::PrPoint> flat;
  for (int i = 1; i <= 4; ++i)
    flat.push_back({static_cast<double>(i) / 4.0, 0.5});
  CHECK(crh::pr_auc(flat) == doctest::Approx(0.5).epsilon(1e-12));

  // Triangle: precision falls 1 -> 0 linearly as recall rises 0 -> 1.
  std::vector<crh::PrPoint> tri;
  const int steps = 1000;
  for (int i = 1; i <= steps; ++i) {
    const double r = static_cast<double>(i) / steps;
    tri.push_back({r, 1.0 - r});
  }
  CHECK(crh::pr_auc(tri) == doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("pr_auc tracks mAP on a typical run") {
  crh::Rng rng(47);
  const crh::DenseMatrix base_x = gaussian_matrix(48, 8, 300);
  const crh::DenseMatrix query_x = gaussian_matrix(49, 8, 40);
  const auto [model, base_codes] = crh::bootstrap_lsh(base_x, 24, 50);
  const crh::CodeMatrix query_codes = crh::lsh_encode(model, query_x);
  const crh::GroundTruth truth = crh::knn_ground_truth(base_x, query_x, 30);
  const crh::EvalReport report = crh::mean_ap(base_codes, query_codes, truth);
  const double auc = crh::pr_auc(report.pr_points);
  // Trapezoidal PR area and mAP are different estimators of the same ranking
  // quality; on a 40-query run they agree to within a few hundredths.
  CHECK(std::abs(auc - report.map) < 0.06);
  CHECK(auc > 0.0);
  CHECK(auc < 1.0);
}
