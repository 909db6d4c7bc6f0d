#pragma once

#include <string>

#include "gapflight/sac.hpp"

namespace gapflight {

// Binary checkpoint: fixed header (magic, version, dims, hidden sizes, core
// hyperparameters, log_alpha, update count) followed by each network's
// parameters as little-endian 64-bit floats in flatten() order
// (actor, critic1, critic2, target1, target2). Writes are atomic
// (temp file + rename). Optimizer moments are not persisted; a resumed
// run restarts Adam.
void save_checkpoint(const std::string& path, const SacState& s);
SacState load_checkpoint(const std::string& path);

}  // namespace gapflight
