#pragma once

#include <string>
#include <vector>

#include "crh/eval.hpp"
#include "crh/stream.hpp"
#include "crh/types.hpp"

namespace crh {

// One (method, bits, neighbors) cell of the sweep table.
struct SweepRow {
  std::string method;
  Index bits = 0;
  Index neighbors = 0;
  double map = 0.0;
};

// All writers go through a temp file + rename, so failures leave no partial
// output. Doubles are printed shortest-round-trip, so equal runs produce
// byte-identical files.
void write_eval_json(const EvalReport& report, const std::string& path);
void write_pr_csv(const std::vector<PrPoint>& points, const std::string& path);

// include_timings=false writes 0 in every millis field, making reports of
// equal-seed runs byte-identical.
void write_sequence_json(const SequenceReport& report, const std::string& path,
                         bool include_timings);
void write_sequence_csv(const SequenceReport& report, const std::string& path,
                        bool include_timings);

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path);
std::vector<SweepRow> read_sweep_csv(const std::string& path);

// Line q holds the comma-separated neighbor indices of query q; every line
// has the same count.
void write_truth_csv(const GroundTruth& truth, const std::string& path);
GroundTruth read_truth_csv(const std::string& path);

}  // namespace crh
