#pragma once

#include <string>

#include "aoa/model.hpp"
#include "aoa/trainer.hpp"

namespace aoa {

// Binary checkpoint: magic "AOA1", little-endian u64 header length, a JSON
// header (format version, train config, vocab, tensor manifest with
// name/shape/dtype/offset), then concatenated little-endian f64 tensor
// payloads. Round-trips bitwise.
inline constexpr char kCheckpointMagic[4] = {'A', 'O', 'A', '1'};
inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    TrainConfig config;
    Vocab vocab;
    ModelParams params;
};

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace aoa
