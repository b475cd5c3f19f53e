#include "crh/stream.hpp"

#include <chrono>
#include <utility>

#include "crh/errors.hpp"
#include "crh/eval.hpp"
#include "crh/rng.hpp"

namespace crh {

namespace {

void check_config(const StreamConfig& cfg) {
  if (cfg.m < 1) throw shape_error("code width must be at least 1");
  if (!(cfg.rho > 0.0 && cfg.rho <= 1.0)) throw shape_error("anchor fraction must lie in (0, 1]");
  if (cfg.eval_neighbors < 1) throw shape_error("eval neighbor count must be at least 1");
  if (cfg.eval_queries_per_step < 1) throw shape_error("eval query count must be at least 1");
}

}  // namespace

std::string method_name(Method method) {
  return method == Method::crh ? "crh" : "lsh";
}

Method parse_method(const std::string& name) {
  if (name == "crh") return Method::crh;
  if (name == "lsh") return Method::lsh;
  throw shape_error("unknown method \"" + name + "\" (expected crh or lsh)");
}

StreamState init_stream(const DenseMatrix& x0_raw, const StreamConfig& cfg) {
  check_config(cfg);
  if (x0_raw.cols() == 0) throw shape_error("initial corpus is empty");

  StreamState state;
  state.cfg = cfg;
  state.normalizer = fit_normalizer(x0_raw);
  state.corpus_x = apply_normalize(x0_raw, state.normalizer);
  auto [model, codes] = bootstrap_lsh(state.corpus_x, cfg.m, cfg.seed);
  state.lsh = std::move(model);
  state.corpus_codes = std::move(codes);
  state.step_index = 0;
  return state;
}

CodeMatrix step(StreamState& state, const DenseMatrix& y_raw) {
  if (y_raw.cols() == 0) throw shape_error("batch is empty");
  const DenseMatrix y = apply_normalize(y_raw, state.normalizer);

  state.step_index += 1;
  CodeMatrix codes;
  if (state.cfg.method == Method::lsh) {
    codes = lsh_encode(state.lsh, y);
  } else {
    EncodeConfig ecfg;
    ecfg.m = state.cfg.m;
    ecfg.rho = state.cfg.rho;
    ecfg.c = state.cfg.c;
    ecfg.k = state.cfg.k;
    ecfg.seed = state.cfg.seed ^ static_cast<std::uint64_t>(state.step_index);
    codes = encode_batch(state.corpus_x, state.corpus_codes, y, ecfg);
  }

  state.corpus_x = hstack(state.corpus_x, y);
  state.corpus_codes.append(codes);
  return codes;
}

SequenceReport run_sequence(const DenseMatrix& x0_raw,
                            const std::vector<DenseMatrix>& batches, const StreamConfig& cfg) {
  if (batches.empty()) throw shape_error("sequence needs at least one batch");

  StreamState state = init_stream(x0_raw, cfg);
  SequenceReport report;
  report.cfg = cfg;
  report.steps.reserve(batches.size());

  for (const DenseMatrix& batch : batches) {
    const Index pre_n = state.corpus_x.cols();
    const DenseMatrix pre_x = state.corpus_x;
    const CodeMatrix pre_codes = state.corpus_codes;

    const auto start = std::chrono::steady_clock::now();
    const CodeMatrix batch_codes = step(state, batch);
    const auto stop = std::chrono::steady_clock::now();

    // Deterministic query draw from the new batch, salted so it never
    // correlates with the encoding stream.
    const Index n_batch = batch_codes.count();
    const Index n_queries = std::min(cfg.eval_queries_per_step, n_batch);
    Rng eval_rng(splitmix64(cfg.seed ^ static_cast<std::uint64_t>(state.step_index)) ^
                 0x9e3779b97f4a7c15ull);
    const std::vector<Index> picks = to_indices(eval_rng.sample_without_replacement(
        static_cast<std::size_t>(n_batch), static_cast<std::size_t>(n_queries)));

    DenseMatrix query_x(state.corpus_x.rows(), n_queries);
    for (Index i = 0; i < n_queries; ++i)
      query_x.col(i) = state.corpus_x.col(pre_n + picks[static_cast<std::size_t>(i)]);
    const CodeMatrix query_codes = batch_codes.select(picks);

    const GroundTruth truth = knn_ground_truth(pre_x, query_x, cfg.eval_neighbors);
    const EvalReport eval = mean_ap(pre_codes, query_codes, truth);

    StepRecord record;
    record.step = state.step_index;
    record.corpus_size = state.corpus_x.cols();
    record.map = eval.map;
    record.millis = std::chrono::duration<double, std::milli>(stop - start).count();
    report.steps.push_back(record);
  }
  return report;
}

}  // namespace crh
