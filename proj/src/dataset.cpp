#include "crh/dataset.hpp"

#include <bit>
#include <charconv>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "crh/io_detail.hpp"

namespace crh {

namespace {

std::vector<std::uint8_t> read_all(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error(path.string() + ": cannot open file");
  f.seekg(0, std::ios::end);
  auto size = static_cast<std::size_t>(f.tellg());
  f.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(size);
  if (size > 0) f.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(size));
  if (!f) throw io_error(path.string() + ": read failed");
  return bytes;
}

std::uint32_t be32(const std::uint8_t* p) {
  return (std::uint32_t(p[0]) << 24) | (std::uint32_t(p[1]) << 16) |
         (std::uint32_t(p[2]) << 8) | std::uint32_t(p[3]);
}

std::uint64_t le64(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

void put_le64(std::uint64_t v, std::ostream& os) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b, 8);
}

double parse_field(const std::string& line, std::size_t begin, std::size_t end,
                   std::size_t line_no, std::size_t field_no) {
  std::size_t b = begin, e = end;
  while (b < e && (line[b] == ' ' || line[b] == '\t')) ++b;
  while (e > b && (line[e - 1] == ' ' || line[e - 1] == '\t')) --e;
  double v = 0.0;
  auto res = std::from_chars(line.data() + b, line.data() + e, v);
  if (res.ec != std::errc{} || res.ptr != line.data() + e)
    throw io_error("line " + std::to_string(line_no) + ", field " + std::to_string(field_no) +
                   ": cannot parse '" + line.substr(begin, end - begin) + "' as a real number");
  return v;
}

}  // namespace

DenseMatrix load_idx(const std::filesystem::path& path) {
  auto bytes = read_all(path);
  if (bytes.size() < 4)
    throw io_error(path.string() + ": truncated header at offset 0 (need 4 magic bytes, have " +
                   std::to_string(bytes.size()) + ")");
  std::uint32_t magic = be32(bytes.data());
  if (magic == 0x00000801u)
    throw io_error(path.string() + ": label file, not image file (magic 0x00000801 at offset 0)");
  if (magic != 0x00000803u) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "0x%08x", magic);
    throw io_error(path.string() + ": bad magic " + buf + " at offset 0 (expected 0x00000803)");
  }
  if (bytes.size() < 16)
    throw io_error(path.string() + ": truncated header at offset 4 (need 3 dimension words, have " +
                   std::to_string(bytes.size() - 4) + " bytes)");
  std::uint64_t n = be32(bytes.data() + 4);
  std::uint64_t rows = be32(bytes.data() + 8);
  std::uint64_t cols = be32(bytes.data() + 12);
  if (rows == 0 || cols == 0)
    throw io_error(path.string() + ": zero image dimensions at offset 8");
  std::uint64_t d = rows * cols;
  if (rows > (1u << 16) || cols > (1u << 16) || d > (1ull << 30) ||
      (n > 0 && d > std::numeric_limits<std::uint64_t>::max() / n))
    throw io_error(path.string() + ": dimension overflow at offset 4 (" + std::to_string(n) +
                   " x " + std::to_string(rows) + " x " + std::to_string(cols) + ")");
  std::uint64_t payload = d * n;
  if (bytes.size() != 16 + payload)
    throw io_error(path.string() + ": truncated payload: need " + std::to_string(payload) +
                   " bytes at offset 16, have " + std::to_string(bytes.size() - 16));
  DenseMatrix m(static_cast<Index>(d), static_cast<Index>(n));
  const std::uint8_t* p = bytes.data() + 16;
  for (std::uint64_t i = 0; i < n; ++i)
    for (std::uint64_t j = 0; j < d; ++j)
      m(static_cast<Index>(j), static_cast<Index>(i)) = double(p[i * d + j]) / 255.0;
  return m;
}

static DenseMatrix load_csv(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw io_error(path.string() + ": cannot open file");
  std::vector<std::vector<double>> samples;
  std::string line;
  std::size_t line_no = 0;
  std::size_t d = 0;
  while (std::getline(f, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<double> fields;
    std::size_t begin = 0;
    for (;;) {
      std::size_t comma = line.find(',', begin);
      std::size_t end = comma == std::string::npos ? line.size() : comma;
      fields.push_back(parse_field(line, begin, end, line_no, fields.size() + 1));
      if (comma == std::string::npos) break;
      begin = comma + 1;
    }
    if (d == 0) d = fields.size();
    if (fields.size() != d)
      throw io_error(path.string() + ": line " + std::to_string(line_no) + ": expected " +
                     std::to_string(d) + " fields, got " + std::to_string(fields.size()));
    samples.push_back(std::move(fields));
  }
  if (samples.empty()) throw io_error(path.string() + ": empty CSV");
  DenseMatrix m(static_cast<Index>(d), static_cast<Index>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < d; ++j)
      m(static_cast<Index>(j), static_cast<Index>(i)) = samples[i][j];
  if (!m.allFinite())
    throw io_error(path.string() + ": non-finite value in CSV payload");
  return m;
}

static DenseMatrix load_rawf64(const std::filesystem::path& path) {
  auto bytes = read_all(path);
  if (bytes.size() < 16)
    throw io_error(path.string() + ": truncated header (need 16 bytes, have " +
                   std::to_string(bytes.size()) + ")");
  std::uint64_t d = le64(bytes.data());
  std::uint64_t n = le64(bytes.data() + 8);
  if (d == 0) throw io_error(path.string() + ": header d = 0 at offset 0");
  if (d > (1ull << 32) || (n > 0 && d > std::numeric_limits<std::uint64_t>::max() / n / 8))
    throw io_error(path.string() + ": dimension overflow in header");
  std::uint64_t payload = 8 * d * n;
  if (bytes.size() != 16 + payload)
    throw io_error(path.string() + ": header/payload size mismatch: header says " +
                   std::to_string(payload) + " payload bytes, file has " +
                   std::to_string(bytes.size() - 16));
  DenseMatrix m(static_cast<Index>(d), static_cast<Index>(n));
  static_assert(sizeof(double) == 8);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(m.data(), bytes.data() + 16, payload);
  } else {
    for (std::uint64_t t = 0; t < d * n; ++t) {
      std::uint64_t bits = le64(bytes.data() + 16 + 8 * t);
      double v;
      std::memcpy(&v, &bits, 8);
      m.data()[t] = v;
    }
  }
  if (!m.allFinite())
    throw io_error(path.string() + ": non-finite value in rawf64 payload");
  return m;
}

DenseMatrix load_dense(const std::filesystem::path& path, DenseFormat format) {
  switch (format) {
    case DenseFormat::idx:
      return load_idx(path);
    case DenseFormat::csv:
      return load_csv(path);
    default:
      return load_rawf64(path);
  }
}

void save_dense(const std::filesystem::path& path, const DenseMatrix& m) {
  atomic_write_stream(path, [&](std::ostream& os) {
    put_le64(static_cast<std::uint64_t>(m.rows()), os);
    put_le64(static_cast<std::uint64_t>(m.cols()), os);
    if constexpr (std::endian::native == std::endian::little) {
      os.write(reinterpret_cast<const char*>(m.data()),
               static_cast<std::streamsize>(sizeof(double) * static_cast<std::size_t>(m.size())));
    } else {
      for (Index t = 0; t < m.size(); ++t) {
        std::uint64_t bits;
        std::memcpy(&bits, m.data() + t, 8);
        put_le64(bits, os);
      }
    }
  });
}

void save_dense_csv(const std::filesystem::path& path, const DenseMatrix& m) {
  atomic_write_stream(path, [&](std::ostream& os) {
    for (Index i = 0; i < m.cols(); ++i) {
      for (Index j = 0; j < m.rows(); ++j) {
        if (j) os << ',';
        os << format_double(m(j, i));
      }
      os << '\n';
    }
  });
}

NormalizationState fit_normalizer(const DenseMatrix& x) {
  if (x.cols() < 1) throw shape_error("fit_normalizer: empty matrix");
  NormalizationState state;
  state.mean = x.rowwise().mean();
  state.fitted = true;
  return state;
}

DenseMatrix apply_normalize(const DenseMatrix& x, const NormalizationState& state) {
  if (!state.fitted) throw shape_error("apply_normalize: normalizer not fitted");
  if (state.mean.size() != x.rows())
    throw shape_error("apply_normalize: normalizer has dimension " +
                      std::to_string(state.mean.size()) + ", data has " +
                      std::to_string(x.rows()));
  DenseMatrix out(x.rows(), x.cols());
  for (Index i = 0; i < x.cols(); ++i) {
    Eigen::VectorXd v = x.col(i) - state.mean;
    double nrm = v.norm();
    if (nrm == 0.0)
      throw io_error("apply_normalize: zero-norm column " + std::to_string(i) +
                     " (column equals the centering mean)");
    out.col(i) = v / nrm;
  }
  return out;
}

}  // namespace crh
