#pragma once

#include <stdexcept>
#include <string>

namespace crh {

// Bad input bytes or degenerate input values (CLI exit code 2).
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dimension or parameter violations (CLI exit code 3).
struct shape_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace crh
