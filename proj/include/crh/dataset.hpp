#pragma once

#include <filesystem>

#include "crh/types.hpp"

namespace crh {

// Centering state fitted once on the initial corpus and frozen afterwards,
// so later stream batches keep the geometry of earlier codes.
struct NormalizationState {
  Eigen::VectorXd mean;
  bool fitted = false;
};

enum class DenseFormat { idx, csv, rawf64 };

// IDX image tensor (magic 0x00000803, big-endian header). One column per
// image, pixels flattened row-major and scaled to [0,1].
DenseMatrix load_idx(const std::filesystem::path& path);

// csv: rows are samples, fields are features.
// rawf64: 16-byte header (u64 d, u64 n, little-endian), then d*n
// little-endian doubles, column-major. Bit-exact with save_dense.
DenseMatrix load_dense(const std::filesystem::path& path, DenseFormat format);

// Writes the rawf64 format. Atomic: temp file then rename.
void save_dense(const std::filesystem::path& path, const DenseMatrix& m);

// Writes CSV with one sample per row (the load_dense csv orientation).
void save_dense_csv(const std::filesystem::path& path, const DenseMatrix& m);

// mean = per-row arithmetic mean over columns.
NormalizationState fit_normalizer(const DenseMatrix& x);

// Each output column is (x - mean) / |x - mean|_2. A column equal to the
// mean is rejected with its column index.
DenseMatrix apply_normalize(const DenseMatrix& x, const NormalizationState& state);

}  // namespace crh
