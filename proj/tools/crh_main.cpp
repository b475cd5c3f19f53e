// crh: continuous random hashing pipeline.
//
// Subcommands: ingest, dump, bootstrap, encode, eval, stream, sweep.
// Exit codes: 0 success, 2 input/parse error, 3 config/shape error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "crh/codes.hpp"
#include "crh/dataset.hpp"
#include "crh/encoder.hpp"
#include "crh/errors.hpp"
#include "crh/eval.hpp"
#include "crh/io_detail.hpp"
#include "crh/report_io.hpp"
#include "crh/stream.hpp"
#include "crh/synthetic.hpp"
#include "crh/types.hpp"

namespace {

using crh::CodeMatrix;
using crh::DenseMatrix;
using crh::Index;

crh::DenseFormat parse_format(const std::string& name) {
  if (name == "idx") return crh::DenseFormat::idx;
  if (name == "csv") return crh::DenseFormat::csv;
  if (name == "rawf64") return crh::DenseFormat::rawf64;
  throw crh::shape_error("unknown format \"" + name + "\" (expected idx, csv, or rawf64)");
}

void ensure_out_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw crh::io_error("cannot create output directory " + dir + ": " + ec.message());
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

struct SyntheticOpts {
  Index dim = 64;
  Index clusters = 10;
  double noise = 0.8;  // overlapping clusters, the regime real feature data lives in
};

void add_synthetic_flags(CLI::App* cmd, SyntheticOpts& opts) {
  cmd->add_option("--dim", opts.dim, "synthetic data dimension");
  cmd->add_option("--clusters", opts.clusters, "synthetic cluster count");
  cmd->add_option("--noise", opts.noise, "synthetic within-cluster noise");
}

// Shared single-shot protocol: bootstrap the base corpus, then code queries
// either against it (crh) or with the bootstrap projections (lsh).
struct CodedSplit {
  DenseMatrix base_x;     // normalized
  DenseMatrix query_x;    // normalized
  CodeMatrix base_codes;  // identical for both methods (same bootstrap)
  CodeMatrix query_codes;
};

CodedSplit code_split(const DenseMatrix& base_raw, const DenseMatrix& query_raw,
                      crh::Method method, const crh::EncodeConfig& cfg) {
  CodedSplit split;
  const crh::NormalizationState norm = crh::fit_normalizer(base_raw);
  split.base_x = crh::apply_normalize(base_raw, norm);
  split.query_x = crh::apply_normalize(query_raw, norm);
  auto [model, base_codes] = crh::bootstrap_lsh(split.base_x, cfg.m, cfg.seed);
  split.base_codes = std::move(base_codes);
  split.query_codes = method == crh::Method::lsh
                          ? crh::lsh_encode(model, split.query_x)
                          : crh::encode_batch(split.base_x, split.base_codes, split.query_x, cfg);
  return split;
}

int cmd_ingest(const std::string& input, const std::string& format, const std::string& output) {
  const DenseMatrix m = crh::load_dense(input, parse_format(format));
  crh::save_dense(output, m);
  std::cout << "ingested " << input << ": d=" << m.rows() << " n=" << m.cols() << " -> " << output
            << "\n";
  return 0;
}

int cmd_dump(const std::string& input, const std::string& output) {
  const DenseMatrix m = crh::load_dense(input, crh::DenseFormat::rawf64);
  crh::save_dense_csv(output, m);
  std::cout << "dumped " << input << ": d=" << m.rows() << " n=" << m.cols() << " -> " << output
            << "\n";
  return 0;
}

int cmd_bootstrap(const std::string& input, const std::string& format, Index bits,
                  std::uint64_t seed, double epsilon, const std::string& codes_out,
                  const std::string& normalized_out) {
  const DenseMatrix raw = crh::load_dense(input, parse_format(format));
  const crh::NormalizationState norm = crh::fit_normalizer(raw);
  const DenseMatrix x = crh::apply_normalize(raw, norm);
  auto [model, codes] = crh::bootstrap_lsh(x, bits, seed, epsilon);
  crh::save_codes(codes_out, codes);
  if (!normalized_out.empty()) crh::save_dense(normalized_out, x);
  std::cout << "bootstrapped " << codes.count() << " codes at " << bits << " bits -> " << codes_out
            << "\n";
  return 0;
}

int cmd_encode(const std::string& corpus_path, const std::string& codes_path,
               const std::string& batch_path, const crh::EncodeConfig& cfg,
               const std::string& codes_out, const std::string& anchors_out) {
  const DenseMatrix corpus_x = crh::load_dense(corpus_path, crh::DenseFormat::rawf64);
  const CodeMatrix corpus_codes = crh::load_codes(codes_path);
  const DenseMatrix y = crh::load_dense(batch_path, crh::DenseFormat::rawf64);
  crh::AnchorSet anchors;
  const CodeMatrix codes =
      crh::encode_batch(corpus_x, corpus_codes, y, cfg, anchors_out.empty() ? nullptr : &anchors);
  crh::save_codes(codes_out, codes);
  if (!anchors_out.empty()) crh::save_anchors(anchors, anchors_out);
  std::cout << "encoded " << codes.count() << " codes at " << cfg.m << " bits -> " << codes_out
            << "\n";
  return 0;
}

int cmd_eval(const std::string& base_path, const std::string& query_path,
             const std::string& truth_path, std::uint64_t seed, const std::string& out_dir) {
  const CodeMatrix base = crh::load_codes(base_path);
  const CodeMatrix queries = crh::load_codes(query_path);
  const crh::GroundTruth truth = crh::read_truth_csv(truth_path);
  crh::EvalReport report = crh::mean_ap(base, queries, truth);
  report.seed = seed;
  ensure_out_dir(out_dir);
  crh::write_eval_json(report, join_path(out_dir, "eval.json"));
  crh::write_pr_csv(report.pr_points, join_path(out_dir, "pr.csv"));
  std::cout << "map=" << crh::format_double(report.map) << " over " << report.per_query_ap.size()
            << " queries -> " << out_dir << "\n";
  return 0;
}

struct StreamOpts {
  std::string input;
  std::string format = "rawf64";
  bool synthetic = false;
  SyntheticOpts syn;
  Index init_size = 2000;
  Index batch_size = 500;
  Index steps = 10;
  crh::StreamConfig cfg;
  std::string method = "crh";
  std::string out_dir = "out";
  bool no_timings = false;
};

int cmd_stream(const StreamOpts& opts) {
  crh::StreamConfig cfg = opts.cfg;
  cfg.method = crh::parse_method(opts.method);

  DenseMatrix all;
  if (opts.synthetic) {
    const Index total = opts.init_size + opts.batch_size * opts.steps;
    all = crh::make_clusters(opts.syn.dim, total, opts.syn.clusters, opts.syn.noise, cfg.seed).x;
  } else {
    if (opts.input.empty())
      throw crh::shape_error("stream needs --input or --synthetic");
    all = crh::load_dense(opts.input, parse_format(opts.format));
  }

  const Index need = opts.init_size + opts.batch_size * opts.steps;
  if (opts.init_size < 1 || opts.batch_size < 1 || opts.steps < 1)
    throw crh::shape_error("init size, batch size, and steps must be at least 1");
  if (all.cols() < need)
    throw crh::shape_error("stream needs " + std::to_string(need) + " columns, input has " +
                           std::to_string(all.cols()));

  const DenseMatrix x0 = all.leftCols(opts.init_size);
  std::vector<DenseMatrix> batches;
  batches.reserve(static_cast<std::size_t>(opts.steps));
  for (Index s = 0; s < opts.steps; ++s)
    batches.push_back(all.middleCols(opts.init_size + s * opts.batch_size, opts.batch_size));

  const crh::SequenceReport report = crh::run_sequence(x0, batches, cfg);
  ensure_out_dir(opts.out_dir);
  crh::write_sequence_json(report, join_path(opts.out_dir, "sequence.json"), !opts.no_timings);
  crh::write_sequence_csv(report, join_path(opts.out_dir, "sequence.csv"), !opts.no_timings);

  double mean = 0.0;
  for (const crh::StepRecord& s : report.steps) mean += s.map;
  mean /= static_cast<double>(report.steps.size());
  std::cout << "stream " << opts.method << ": " << report.steps.size()
            << " steps, mean map=" << crh::format_double(mean) << " -> " << opts.out_dir << "\n";
  return 0;
}

struct SweepOpts {
  std::string input;
  std::string format = "rawf64";
  bool synthetic = false;
  SyntheticOpts syn;
  Index base_size = 2000;
  Index query_count = 200;
  double rho = 0.09;
  Index columns = 0;
  Index rank = 0;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
};

int cmd_sweep(const SweepOpts& opts) {
  const std::vector<Index> bit_grid = {8, 16, 24, 32, 48, 64};
  const std::vector<Index> neighbor_grid = {25, 50, 100, 200};
  constexpr Index kFixedBits = 16;
  constexpr Index kFixedNeighbors = 100;

  DenseMatrix all;
  if (opts.synthetic) {
    all = crh::make_clusters(opts.syn.dim, opts.base_size + opts.query_count, opts.syn.clusters,
                             opts.syn.noise, opts.seed)
              .x;
  } else {
    if (opts.input.empty()) throw crh::shape_error("sweep needs --input or --synthetic");
    all = crh::load_dense(opts.input, parse_format(opts.format));
  }
  if (opts.base_size < 1 || opts.query_count < 1)
    throw crh::shape_error("base size and query count must be at least 1");
  if (all.cols() < opts.base_size + opts.query_count)
    throw crh::shape_error("sweep needs " + std::to_string(opts.base_size + opts.query_count) +
                           " columns, input has " + std::to_string(all.cols()));
  const DenseMatrix base_raw = all.leftCols(opts.base_size);
  const DenseMatrix query_raw = all.middleCols(opts.base_size, opts.query_count);

  const Index max_neighbors = *std::max_element(neighbor_grid.begin(), neighbor_grid.end());
  if (max_neighbors > opts.base_size)
    throw crh::shape_error("base size must be at least " + std::to_string(max_neighbors));

  // (bits, neighbors) cells: the bit sweep at fixed neighbors plus the
  // neighbor sweep at fixed bits, deduplicated.
  std::vector<std::pair<Index, Index>> cells;
  for (const Index bits : bit_grid) cells.emplace_back(bits, kFixedNeighbors);
  for (const Index neighbors : neighbor_grid)
    if (neighbors != kFixedNeighbors) cells.emplace_back(kFixedBits, neighbors);

  // Truth at the largest neighbor count once; prefixes serve the smaller ones.
  const crh::NormalizationState norm = crh::fit_normalizer(base_raw);
  const DenseMatrix base_x = crh::apply_normalize(base_raw, norm);
  const DenseMatrix query_x = crh::apply_normalize(query_raw, norm);
  const crh::GroundTruth full_truth = crh::knn_ground_truth(base_x, query_x, max_neighbors);

  std::vector<crh::SweepRow> rows;
  for (const crh::Method method : {crh::Method::crh, crh::Method::lsh}) {
    for (const auto& [bits, neighbors] : cells) {
      crh::EncodeConfig cfg;
      cfg.m = bits;
      cfg.rho = opts.rho;
      cfg.c = opts.columns;
      cfg.k = opts.rank;
      cfg.seed = opts.seed;
      const CodedSplit split = code_split(base_raw, query_raw, method, cfg);

      crh::GroundTruth truth;
      truth.k = neighbors;
      truth.neighbors.reserve(full_truth.neighbors.size());
      for (const auto& list : full_truth.neighbors)
        truth.neighbors.emplace_back(list.begin(), list.begin() + neighbors);

      const crh::EvalReport report = crh::mean_ap(split.base_codes, split.query_codes, truth);
      rows.push_back({crh::method_name(method), bits, neighbors, report.map});
    }
  }

  std::sort(rows.begin(), rows.end(), [](const crh::SweepRow& a, const crh::SweepRow& b) {
    return std::tie(a.method, a.bits, a.neighbors) < std::tie(b.method, b.bits, b.neighbors);
  });
  ensure_out_dir(opts.out_dir);
  crh::write_sweep_csv(rows, join_path(opts.out_dir, "sweep.csv"));
  std::cout << "sweep: " << rows.size() << " rows -> " << join_path(opts.out_dir, "sweep.csv")
            << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous random hashing pipeline"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value config file; flags override file values");

  std::string in_path, out_path, format = "rawf64";
  auto* ingest = app.add_subcommand("ingest", "convert idx/csv/rawf64 input to rawf64");
  ingest->add_option("--input", in_path, "input path")->required();
  ingest->add_option("--format", format, "idx, csv, or rawf64");
  ingest->add_option("--output", out_path, "output rawf64 path")->required();

  std::string dump_in, dump_out;
  auto* dump = app.add_subcommand("dump", "write a rawf64 matrix as csv");
  dump->add_option("--input", dump_in, "input rawf64 path")->required();
  dump->add_option("--output", dump_out, "output csv path")->required();

  std::string boot_in, boot_format = "rawf64", boot_codes_out, boot_norm_out;
  Index boot_bits = 16;
  std::uint64_t boot_seed = 0;
  double boot_epsilon = 0.0;
  auto* boot = app.add_subcommand("bootstrap", "normalize data and code it with seeded projections");
  boot->add_option("--input", boot_in, "input path")->required();
  boot->add_option("--format", boot_format, "idx, csv, or rawf64");
  boot->add_option("--bits", boot_bits, "code width");
  boot->add_option("--seed", boot_seed, "rng seed");
  boot->add_option("--epsilon", boot_epsilon, "projection threshold");
  boot->add_option("--codes-out", boot_codes_out, "output packed codes path")->required();
  boot->add_option("--normalized-out", boot_norm_out, "optional normalized rawf64 output");

  std::string enc_corpus, enc_codes, enc_batch, enc_out, enc_anchors;
  crh::EncodeConfig enc_cfg;
  auto* enc = app.add_subcommand("encode", "code a batch against a coded corpus");
  enc->add_option("--corpus", enc_corpus, "normalized corpus rawf64")->required();
  enc->add_option("--codes", enc_codes, "corpus packed codes")->required();
  enc->add_option("--batch", enc_batch, "normalized batch rawf64")->required();
  enc->add_option("--bits", enc_cfg.m, "code width");
  enc->add_option("--rho", enc_cfg.rho, "anchor fraction");
  enc->add_option("--columns", enc_cfg.c, "sampled columns, 0 = 2*bits");
  enc->add_option("--rank", enc_cfg.k, "model rank, 0 = bits");
  enc->add_option("--seed", enc_cfg.seed, "rng seed");
  enc->add_option("--codes-out", enc_out, "output packed codes path")->required();
  enc->add_option("--anchors-out", enc_anchors, "optional anchor file stem");

  std::string eval_base, eval_query, eval_truth, eval_out = "out";
  std::uint64_t eval_seed = 0;
  auto* eval = app.add_subcommand("eval", "mAP and PR curve of query codes against base codes");
  eval->add_option("--base-codes", eval_base, "base packed codes")->required();
  eval->add_option("--query-codes", eval_query, "query packed codes")->required();
  eval->add_option("--truth", eval_truth, "ground truth csv")->required();
  eval->add_option("--seed", eval_seed, "seed echoed into the report");
  eval->add_option("--out", eval_out, "output directory");

  StreamOpts stream_opts;
  auto* stream = app.add_subcommand("stream", "absorb sequential batches and track per-step mAP");
  stream->add_option("--input", stream_opts.input, "input path");
  stream->add_option("--format", stream_opts.format, "idx, csv, or rawf64");
  stream->add_flag("--synthetic", stream_opts.synthetic, "use the bundled cluster generator");
  add_synthetic_flags(stream, stream_opts.syn);
  stream->add_option("--init-size", stream_opts.init_size, "initial corpus size");
  stream->add_option("--batch-size", stream_opts.batch_size, "columns per batch");
  stream->add_option("--steps", stream_opts.steps, "number of batches");
  stream->add_option("--bits", stream_opts.cfg.m, "code width");
  stream->add_option("--rho", stream_opts.cfg.rho, "anchor fraction");
  stream->add_option("--columns", stream_opts.cfg.c, "sampled columns, 0 = 2*bits");
  stream->add_option("--rank", stream_opts.cfg.k, "model rank, 0 = bits");
  stream->add_option("--seed", stream_opts.cfg.seed, "rng seed");
  stream->add_option("--neighbors", stream_opts.cfg.eval_neighbors, "ground truth neighbors");
  stream->add_option("--queries-per-step", stream_opts.cfg.eval_queries_per_step,
                     "queries drawn from each batch");
  stream->add_option("--method", stream_opts.method, "crh or lsh");
  stream->add_option("--out", stream_opts.out_dir, "output directory");
  stream->add_flag("--no-timings", stream_opts.no_timings,
                   "write 0 in millis fields for byte-identical reports");

  SweepOpts sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "mAP table over bit widths and neighbor counts");
  sweep->add_option("--input", sweep_opts.input, "input path");
  sweep->add_option("--format", sweep_opts.format, "idx, csv, or rawf64");
  sweep->add_flag("--synthetic", sweep_opts.synthetic, "use the bundled cluster generator");
  add_synthetic_flags(sweep, sweep_opts.syn);
  sweep->add_option("--base-size", sweep_opts.base_size, "base corpus size");
  sweep->add_option("--query-count", sweep_opts.query_count, "query count");
  sweep->add_option("--rho", sweep_opts.rho, "anchor fraction");
  sweep->add_option("--columns", sweep_opts.columns, "sampled columns, 0 = 2*bits");
  sweep->add_option("--rank", sweep_opts.rank, "model rank, 0 = bits");
  sweep->add_option("--seed", sweep_opts.seed, "rng seed");
  sweep->add_option("--out", sweep_opts.out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (ingest->parsed()) return cmd_ingest(in_path, format, out_path);
    if (dump->parsed()) return cmd_dump(dump_in, dump_out);
    if (boot->parsed())
      return cmd_bootstrap(boot_in, boot_format, boot_bits, boot_seed, boot_epsilon,
                           boot_codes_out, boot_norm_out);
    if (enc->parsed()) return cmd_encode(enc_corpus, enc_codes, enc_batch, enc_cfg, enc_out,
                                         enc_anchors);
    if (eval->parsed()) return cmd_eval(eval_base, eval_query, eval_truth, eval_seed, eval_out);
    if (stream->parsed()) return cmd_stream(stream_opts);
    if (sweep->parsed()) return cmd_sweep(sweep_opts);
  } catch (const crh::io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const crh::shape_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
