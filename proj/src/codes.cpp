#include "crh/codes.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <string>

#include "crh/errors.hpp"
#include "crh/io_detail.hpp"

namespace crh {

CodeMatrix::CodeMatrix(Index m, Index n) : m_(m), n_(n) {
  if (m < 1) throw shape_error("CodeMatrix: m must be >= 1");
  if (n < 0) throw shape_error("CodeMatrix: negative count");
  wpc_ = (m + 63) / 64;
  w_.assign(static_cast<std::size_t>(wpc_ * n), 0);
}

void CodeMatrix::check_code(Index code) const {
  if (code < 0 || code >= n_)
    throw shape_error("CodeMatrix: code index " + std::to_string(code) + " out of range [0, " +
                      std::to_string(n_) + ")");
}

int CodeMatrix::get(Index code, Index bit) const {
  check_code(code);
  if (bit < 0 || bit >= m_) throw shape_error("CodeMatrix: bit index out of range");
  std::uint64_t word = w_[static_cast<std::size_t>(code * wpc_ + bit / 64)];
  return (word >> (bit % 64)) & 1u ? +1 : -1;
}

void CodeMatrix::set(Index code, Index bit, int value) {
  check_code(code);
  if (bit < 0 || bit >= m_) throw shape_error("CodeMatrix: bit index out of range");
  if (value != 1 && value != -1) throw shape_error("CodeMatrix: entries must be +1 or -1");
  std::uint64_t& word = w_[static_cast<std::size_t>(code * wpc_ + bit / 64)];
  std::uint64_t mask = 1ull << (bit % 64);
  if (value == 1)
    word |= mask;
  else
    word &= ~mask;
}

Eigen::VectorXd CodeMatrix::column(Index code) const {
  check_code(code);
  Eigen::VectorXd v(m_);
  for (Index j = 0; j < m_; ++j) v(j) = get(code, j);
  return v;
}

Eigen::MatrixXd CodeMatrix::to_dense() const {
  Eigen::MatrixXd d(m_, n_);
  for (Index i = 0; i < n_; ++i)
    for (Index j = 0; j < m_; ++j) d(j, i) = get(i, j);
  return d;
}

void CodeMatrix::set_column(Index code, const Eigen::VectorXd& v) {
  check_code(code);
  if (v.size() != m_) throw shape_error("CodeMatrix: column length mismatch");
  for (Index j = 0; j < m_; ++j) set(code, j, v(j) >= 0.0 ? +1 : -1);
}

void CodeMatrix::append(const CodeMatrix& other) {
  if (n_ == 0 && m_ == 0) {
    *this = other;
    return;
  }
  if (other.m_ != m_)
    throw shape_error("CodeMatrix::append: bit width mismatch (" + std::to_string(m_) + " vs " +
                      std::to_string(other.m_) + ")");
  w_.insert(w_.end(), other.w_.begin(), other.w_.end());
  n_ += other.n_;
}

CodeMatrix CodeMatrix::select(const std::vector<Index>& indices) const {
  CodeMatrix out(m_, static_cast<Index>(indices.size()));
  for (std::size_t t = 0; t < indices.size(); ++t) {
    check_code(indices[t]);
    std::memcpy(out.w_.data() + static_cast<std::size_t>(t) * wpc_,
                w_.data() + static_cast<std::size_t>(indices[t]) * wpc_,
                sizeof(std::uint64_t) * static_cast<std::size_t>(wpc_));
  }
  return out;
}

CodeMatrix CodeMatrix::head(Index n) const {
  if (n < 0 || n > n_) throw shape_error("CodeMatrix::head: out of range");
  CodeMatrix out(m_, n);
  std::memcpy(out.w_.data(), w_.data(),
              sizeof(std::uint64_t) * static_cast<std::size_t>(wpc_ * n));
  return out;
}

Index hamming(const CodeMatrix& a, Index i, const CodeMatrix& b, Index j) {
  if (a.bits() != b.bits())
    throw shape_error("hamming: code lengths differ (" + std::to_string(a.bits()) + " vs " +
                      std::to_string(b.bits()) + ")");
  const std::uint64_t* wa = a.words(i);
  const std::uint64_t* wb = b.words(j);
  Index h = 0;
  for (Index w = 0; w < a.words_per_code(); ++w)
    h += std::popcount(wa[w] ^ wb[w]);
  return h;
}

std::vector<std::uint8_t> pack_codes(const CodeMatrix& codes) {
  const Index m = codes.bits(), n = codes.count();
  const Index bpc = (m + 7) / 8;
  std::vector<std::uint8_t> out(16 + static_cast<std::size_t>(bpc * n));
  for (int i = 0; i < 8; ++i) {
    out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>((std::uint64_t(m) >> (8 * i)) & 0xff);
    out[static_cast<std::size_t>(8 + i)] = static_cast<std::uint8_t>((std::uint64_t(n) >> (8 * i)) & 0xff);
  }
  for (Index c = 0; c < n; ++c) {
    const std::uint64_t* w = codes.words(c);
    for (Index k = 0; k < bpc; ++k)
      out[static_cast<std::size_t>(16 + c * bpc + k)] =
          static_cast<std::uint8_t>((w[k / 8] >> (8 * (k % 8))) & 0xff);
  }
  return out;
}

CodeMatrix unpack_codes(const std::uint8_t* data, std::size_t size) {
  if (size < 16)
    throw io_error("unpack_codes: truncated header (need 16 bytes, have " + std::to_string(size) + ")");
  std::uint64_t m = 0, n = 0;
  for (int i = 7; i >= 0; --i) m = (m << 8) | data[i];
  for (int i = 7; i >= 0; --i) n = (n << 8) | data[8 + i];
  if (m == 0) throw io_error("unpack_codes: header m = 0");
  if (m > (1ull << 20) || n > (1ull << 40))
    throw io_error("unpack_codes: header dimensions overflow");
  std::uint64_t bpc = (m + 7) / 8;
  if (size != 16 + bpc * n)
    throw io_error("unpack_codes: payload size mismatch: header implies " +
                   std::to_string(bpc * n) + " bytes, have " + std::to_string(size - 16));
  CodeMatrix out(static_cast<Index>(m), static_cast<Index>(n));
  const std::uint8_t pad_mask =
      (m % 8) ? static_cast<std::uint8_t>(0xffu << (m % 8)) : std::uint8_t{0};
  for (std::uint64_t c = 0; c < n; ++c) {
    const std::uint8_t* p = data + 16 + c * bpc;
    if (pad_mask && (p[bpc - 1] & pad_mask))
      throw io_error("unpack_codes: nonzero padding bits in code " + std::to_string(c));
    for (std::uint64_t k = 0; k < bpc; ++k) {
      std::uint8_t byte = p[k];
      for (int b = 0; b < 8; ++b) {
        std::uint64_t j = 8 * k + static_cast<std::uint64_t>(b);
        if (j >= m) break;
        if (byte & (1u << b)) out.set(static_cast<Index>(c), static_cast<Index>(j), +1);
      }
    }
  }
  return out;
}

void save_codes(const std::filesystem::path& path, const CodeMatrix& codes) {
  auto bytes = pack_codes(codes);
  atomic_write_stream(path, [&](std::ostream& os) {
    os.write(reinterpret_cast<const char*>(bytes.data()),
             static_cast<std::streamsize>(bytes.size()));
  });
}

CodeMatrix load_codes(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw io_error(path.string() + ": cannot open file");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                  std::istreambuf_iterator<char>());
  try {
    return unpack_codes(bytes.data(), bytes.size());
  } catch (const io_error& e) {
    throw io_error(path.string() + ": " + e.what());
  }
}

}  // namespace crh
