#pragma once

#include <filesystem>

#include "omni/alignnet.hpp"
#include "omni/trainer.hpp"

namespace omni {

// Model directories: one OMNI tensor file per parameter plus a
// manifest.json carrying shapes and hyperparameters.

void save_linear_heads(const std::filesystem::path& dir, const LinearHeads& heads, uint64_t seed,
                       double init_scale);
LinearHeads load_linear_heads(const std::filesystem::path& dir);

void save_align_head_params(const std::filesystem::path& dir, const AlignHeadParams& params,
                            uint64_t seed, double tau);
AlignHeadParams load_align_head_params(const std::filesystem::path& dir);

}  // namespace omni
