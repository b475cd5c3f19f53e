#include "crh/report_io.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>

#include "crh/errors.hpp"
#include "crh/io_detail.hpp"

namespace crh {

namespace {

using ordered_json = nlohmann::ordered_json;

double parse_csv_double(const std::string& field, const std::string& path, std::size_t line_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw io_error(path + ": line " + std::to_string(line_no) + ": expected a number, got \"" +
                   field + "\"");
  return value;
}

long long parse_csv_int(const std::string& field, const std::string& path, std::size_t line_no) {
  long long value = 0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end)
    throw io_error(path + ": line " + std::to_string(line_no) + ": expected an integer, got \"" +
                   field + "\"");
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream stream(line);
  while (std::getline(stream, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

ordered_json sequence_json(const SequenceReport& report, bool include_timings) {
  ordered_json doc;
  doc["method"] = method_name(report.cfg.method);
  doc["bits"] = report.cfg.m;
  doc["rho"] = report.cfg.rho;
  doc["columns"] = report.cfg.c;
  doc["rank"] = report.cfg.k;
  doc["seed"] = report.cfg.seed;
  doc["eval_neighbors"] = report.cfg.eval_neighbors;
  doc["eval_queries_per_step"] = report.cfg.eval_queries_per_step;
  doc["steps"] = ordered_json::array();
  for (const StepRecord& s : report.steps) {
    ordered_json row;
    row["step"] = s.step;
    row["corpus_size"] = s.corpus_size;
    row["map"] = s.map;
    row["millis"] = include_timings ? s.millis : 0.0;
    doc["steps"].push_back(std::move(row));
  }
  return doc;
}

}  // namespace

void write_eval_json(const EvalReport& report, const std::string& path) {
  ordered_json doc;
  doc["map"] = report.map;
  doc["bits"] = report.bits;
  doc["neighbors"] = report.neighbors;
  doc["seed"] = report.seed;
  doc["query_count"] = report.per_query_ap.size();
  doc["per_query_ap"] = report.per_query_ap;
  doc["pr_points"] = ordered_json::array();
  for (const PrPoint& pt : report.pr_points) {
    ordered_json row;
    row["recall"] = pt.recall;
    row["precision"] = pt.precision;
    doc["pr_points"].push_back(std::move(row));
  }
  atomic_write_stream(path, [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
}

void write_pr_csv(const std::vector<PrPoint>& points, const std::string& path) {
  atomic_write_stream(path, [&](std::ostream& out) {
    out << "rank,recall,precision\n";
    for (std::size_t i = 0; i < points.size(); ++i)
      out << (i + 1) << "," << format_double(points[i].recall) << ","
          << format_double(points[i].precision) << "\n";
  });
}

void write_sequence_json(const SequenceReport& report, const std::string& path,
                         bool include_timings) {
  const ordered_json doc = sequence_json(report, include_timings);
  atomic_write_stream(path, [&](std::ostream& out) { out << doc.dump(2) << "\n"; });
}

void write_sequence_csv(const SequenceReport& report, const std::string& path,
                        bool include_timings) {
  atomic_write_stream(path, [&](std::ostream& out) {
    out << "step,corpus_size,map,millis\n";
    for (const StepRecord& s : report.steps)
      out << s.step << "," << s.corpus_size << "," << format_double(s.map) << ","
          << format_double(include_timings ? s.millis : 0.0) << "\n";
  });
}

void write_sweep_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  atomic_write_stream(path, [&](std::ostream& out) {
    out << "method,bits,neighbors,map\n";
    for (const SweepRow& row : rows)
      out << row.method << "," << row.bits << "," << row.neighbors << ","
          << format_double(row.map) << "\n";
  });
}

std::vector<SweepRow> read_sweep_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw io_error(path + ": empty file");
  if (line == "method,bits,neighbors,map\r") line.pop_back();
  if (line != "method,bits,neighbors,map")
    throw io_error(path + ": line 1: expected header \"method,bits,neighbors,map\", got \"" +
                   line + "\"");

  std::vector<SweepRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 4)
      throw io_error(path + ": line " + std::to_string(line_no) + ": expected 4 fields, got " +
                     std::to_string(fields.size()));
    SweepRow row;
    row.method = fields[0];
    row.bits = static_cast<Index>(parse_csv_int(fields[1], path, line_no));
    row.neighbors = static_cast<Index>(parse_csv_int(fields[2], path, line_no));
    row.map = parse_csv_double(fields[3], path, line_no);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_truth_csv(const GroundTruth& truth, const std::string& path) {
  atomic_write_stream(path, [&](std::ostream& out) {
    for (const auto& list : truth.neighbors) {
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (i > 0) out << ",";
        out << list[i];
      }
      out << "\n";
    }
  });
}

GroundTruth read_truth_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  GroundTruth truth;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv_line(line);
    std::vector<Index> list;
    list.reserve(fields.size());
    for (const std::string& field : fields) {
      const long long value = parse_csv_int(field, path, line_no);
      if (value < 0)
        throw io_error(path + ": line " + std::to_string(line_no) + ": negative index");
      list.push_back(static_cast<Index>(value));
    }
    if (!truth.neighbors.empty() && list.size() != truth.neighbors.front().size())
      throw io_error(path + ": line " + std::to_string(line_no) + ": expected " +
                     std::to_string(truth.neighbors.front().size()) + " indices, got " +
                     std::to_string(list.size()));
    truth.neighbors.push_back(std::move(list));
  }
  if (truth.neighbors.empty()) throw io_error(path + ": no ground truth rows");
  truth.k = static_cast<Index>(truth.neighbors.front().size());
  return truth;
}

}  // namespace crh
