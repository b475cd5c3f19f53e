#pragma once

// Umbrella header: the full public surface of the library.

#include "crh/codes.hpp"
#include "crh/dataset.hpp"
#include "crh/encoder.hpp"
#include "crh/errors.hpp"
#include "crh/eval.hpp"
#include "crh/gram.hpp"
#include "crh/report_io.hpp"
#include "crh/rng.hpp"
#include "crh/stream.hpp"
#include "crh/synthetic.hpp"
#include "crh/types.hpp"
