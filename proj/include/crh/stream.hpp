#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "crh/codes.hpp"
#include "crh/dataset.hpp"
#include "crh/encoder.hpp"
#include "crh/types.hpp"

namespace crh {

// crh encodes each batch against the accumulated coded corpus; lsh is the
// classical baseline that keeps applying the bootstrap projections.
enum class Method { crh, lsh };

std::string method_name(Method method);
Method parse_method(const std::string& name);

struct StreamConfig {
  Index m = 16;
  double rho = 0.09;
  Index c = 0;  // 0 means 2*m
  Index k = 0;  // 0 means m
  std::uint64_t seed = 0;
  Index eval_neighbors = 50;
  Index eval_queries_per_step = 100;
  Method method = Method::crh;
};

// Accumulated coded corpus. The normalizer is fitted on the initial corpus
// and frozen; corpusX holds normalized columns; corpusX cols == corpusCodes
// count always.
struct StreamState {
  StreamConfig cfg;
  NormalizationState normalizer;
  LshModel lsh;  // bootstrap projections, reused when cfg.method == lsh
  DenseMatrix corpus_x;
  CodeMatrix corpus_codes;
  Index step_index = 0;  // batches absorbed so far
};

struct StepRecord {
  Index step = 0;         // 1-based
  Index corpus_size = 0;  // after the batch is absorbed
  double map = 0.0;       // new-batch queries vs the pre-step corpus
  double millis = 0.0;    // encoding time for the batch
};

struct SequenceReport {
  StreamConfig cfg;
  std::vector<StepRecord> steps;
};

StreamState init_stream(const DenseMatrix& x0_raw, const StreamConfig& cfg);

// Absorb one batch: normalize with the frozen normalizer, encode against the
// accumulated corpus with per-step seed cfg.seed ^ step, append. Earlier codes
// are never touched. Returns the batch codes.
CodeMatrix step(StreamState& state, const DenseMatrix& y_raw);

// init + one step per batch; after each step, mAP of eval_queries_per_step
// new-batch queries against the pre-step corpus (Euclidean ground truth at
// eval_neighbors, computed on normalized data).
SequenceReport run_sequence(const DenseMatrix& x0_raw,
                            const std::vector<DenseMatrix>& batches, const StreamConfig& cfg);

}  // namespace crh
