#include <doctest.h>

#include <json.hpp>
#include <string>
#include <vector>

#include "crh/errors.hpp"
#include "crh/report_io.hpp"
#include "helpers.hpp"

using testing_oracles::read_file;
using testing_oracles::TempDir;

TEST_CASE("eval json carries the full report and parses back") {
  crh::EvalReport report;
  report.map = 0.625;
  report.per_query_ap = {0.5, 0.75};
  report.pr_points = {{0.25, 1.0}, {1.0, 0.5}};
  report.bits = 16;
  report.neighbors = 50;
  report.seed = 9;

  TempDir dir;
  const auto path = dir.file("eval.json");
  crh::write_eval_json(report, path);
  const auto j = nlohmann::json::parse(read_file(path));
  CHECK(j["map"].get<double>() == 0.625);
  CHECK(j["bits"].get<int>() == 16);
  CHECK(j["neighbors"].get<int>() == 50);
  CHECK(j["seed"].get<std::uint64_t>() == 9);
  CHECK(j["query_count"].get<int>() == 2);
  REQUIRE(j["per_query_ap"].size() == 2);
  CHECK(j["per_query_ap"][1].get<double>() == 0.75);
  REQUIRE(j["pr_points"].size() == 2);
  CHECK(j["pr_points"][0]["recall"].get<double>() == 0.25);
  CHECK(j["pr_points"][0]["precision"].get<double>() == 1.0);
}

TEST_CASE("pr csv has a header row and one line per point") {
  TempDir dir;
  const auto path = dir.file("pr.csv");
  crh::write_pr_csv({{0.5, 0.25}, {1.0, 0.125}}, path);
  CHECK(read_file(path) == "rank,recall,precision\n1,0.5,0.25\n2,1,0.125\n");
}

TEST_CASE("sequence reports serialize with and without timings") {
  crh::SequenceReport report;
  report.cfg.m = 16;
  report.cfg.rho = 0.09;
  report.cfg.seed = 4;
  report.cfg.method = crh::Method::crh;
  report.steps = {{1, 2100, 0.5, 12.5}, {2, 2200, 0.625, 13.5}};

  TempDir dir;
  const auto jpath = dir.file("seq.json");
  crh::write_sequence_json(report, jpath, true);
  auto j = nlohmann::json::parse(read_file(jpath));
  CHECK(j["method"].get<std::string>() == "crh");
  CHECK(j["bits"].get<int>() == 16);
  CHECK(j["rho"].get<double>() == 0.09);
  REQUIRE(j["steps"].size() == 2);
  CHECK(j["steps"][0]["corpus_size"].get<int>() == 2100);
  CHECK(j["steps"][1]["map"].get<double>() == 0.625);
  CHECK(j["steps"][1]["millis"].get<double>() == 13.5);

  crh::write_sequence_json(report, jpath, false);
  j = nlohmann::json::parse(read_file(jpath));
  CHECK(j["steps"][1]["millis"].get<double>() == 0.0);

  const auto cpath = dir.file("seq.csv");
  crh::write_sequence_csv(report, cpath, false);
  const std::string csv = read_file(cpath);
  CHECK(csv.find("step,corpus_size,map,millis") == 0);
  CHECK(csv.find("1,2100,0.5,0") != std::string::npos);
  CHECK(csv.find("12.5") == std::string::npos);

  // Stripped timings make repeated runs byte-identical even when clocks vary.
  crh::SequenceReport jittered = report;
  jittered.steps[0].millis = 99.0;
  const auto cpath2 = dir.file("seq2.csv");
  crh::write_sequence_csv(jittered, cpath2, false);
  CHECK(read_file(cpath2) == csv);
}

TEST_CASE("sweep csv round trips") {
  const std::vector<crh::SweepRow> rows = {
      {"crh", 8, 100, 0.25}, {"crh", 16, 100, 0.5}, {"lsh", 16, 100, 0.375}};
  TempDir dir;
  const auto path = dir.file("sweep.csv");
  crh::write_sweep_csv(rows, path);
  const auto back = crh::read_sweep_csv(path);
  REQUIRE(back.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(back[i].method == rows[i].method);
    CHECK(back[i].bits == rows[i].bits);
    CHECK(back[i].neighbors == rows[i].neighbors);
    CHECK(back[i].map == rows[i].map);
  }
  CHECK(read_file(path).rfind("method,bits,neighbors,map\n", 0) == 0);
}

TEST_CASE("sweep csv reader rejects malformed tables") {
  TempDir dir;
  const auto path = dir.file("bad.csv");
  std::ofstream(path) << "method,bits,neighbors,map\ncrh,8,100\n";
  CHECK_THROWS_AS(crh::read_sweep_csv(path), crh::io_error);
  std::ofstream(path) << "method,bits,neighbors,map\ncrh,eight,100,0.5\n";
  CHECK_THROWS_AS(crh::read_sweep_csv(path), crh::io_error);
  CHECK_THROWS_AS(crh::read_sweep_csv(dir.file("absent.csv")), crh::io_error);
}

TEST_CASE("truth csv round trips and enforces rectangular lines") {
  crh::GroundTruth truth;
  truth.k = 3;
  truth.neighbors = {{4, 1, 9}, {0, 2, 7}};
  TempDir dir;
  const auto path = dir.file("truth.csv");
  crh::write_truth_csv(truth, path);
  const crh::GroundTruth back = crh::read_truth_csv(path);
  CHECK(back.k == 3);
  CHECK(back.neighbors == truth.neighbors);

  std::ofstream(path) << "1,2,3\n4,5\n";
  CHECK_THROWS_AS(crh::read_truth_csv(path), crh::io_error);
}
