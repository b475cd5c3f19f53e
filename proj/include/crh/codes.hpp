#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "crh/types.hpp"

namespace crh {

// m-bit binary codes in {-1,+1}, n codes. Bit j of code i lives at bit
// (j % 64) of word i*words_per_code() + j/64; a set bit means +1. Unused
// high bits of the last word are always zero, which makes the in-memory
// words byte-identical to the packed persistent form on little-endian
// slicing: packed byte k of a code equals bits 8k..8k+7.
//
// Packed form: 16-byte header (u64 m, u64 n, little-endian), then per code
// ceil(m/8) bytes where bit (j % 8) of byte j/8 is 1 iff entry j = +1.
class CodeMatrix {
 public:
  CodeMatrix() = default;
  CodeMatrix(Index m, Index n);  // all entries -1

  Index bits() const { return m_; }
  Index count() const { return n_; }
  Index words_per_code() const { return wpc_; }

  int get(Index code, Index bit) const;
  void set(Index code, Index bit, int value);  // value is +1 or -1

  const std::uint64_t* words(Index code) const { return w_.data() + code * wpc_; }

  Eigen::VectorXd column(Index code) const;  // one code as a ±1 vector
  Eigen::MatrixXd to_dense() const;          // m x n of ±1

  // Sets code i from the signs of v (v(j) >= 0 encodes +1).
  void set_column(Index code, const Eigen::VectorXd& v);

  void append(const CodeMatrix& other);
  CodeMatrix select(const std::vector<Index>& indices) const;
  CodeMatrix head(Index n) const;  // first n codes

  bool operator==(const CodeMatrix& other) const {
    return m_ == other.m_ && n_ == other.n_ && w_ == other.w_;
  }

 private:
  Index m_ = 0, n_ = 0, wpc_ = 0;
  std::vector<std::uint64_t> w_;

  void check_code(Index code) const;
};

// Number of differing bit positions; equals (m - s.t)/2 for ±1 codes.
// Computed on the packed words via XOR + popcount.
Index hamming(const CodeMatrix& a, Index i, const CodeMatrix& b, Index j);

std::vector<std::uint8_t> pack_codes(const CodeMatrix& codes);
CodeMatrix unpack_codes(const std::uint8_t* data, std::size_t size);

void save_codes(const std::filesystem::path& path, const CodeMatrix& codes);
CodeMatrix load_codes(const std::filesystem::path& path);

}  // namespace crh
