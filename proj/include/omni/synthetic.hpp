#pragma once

#include <vector>

#include "omni/alignnet.hpp"
#include "omni/config.hpp"

namespace omni {

// Paired modality sequences from a shared latent: per pair, one latent z,
// vision rows P_v z + sigma*noise and audio rows P_a z + sigma*noise, with
// ascending uniform timestamps over [0, duration).
struct SyntheticPairs {
    OmniBatch batch;
    std::vector<Vec> vision_timestamps;  // per sample, length n_v
    std::vector<Vec> audio_timestamps;   // per sample, length n_a
    Mat latents;                         // k x latent_dim
    Mat proj_v, proj_a;                  // c x latent_dim
};

SyntheticPairs gen_synthetic_pairs(const SyntheticPairConfig& cfg);

}  // namespace omni
