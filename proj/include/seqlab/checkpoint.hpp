#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "seqlab/mtl.hpp"

namespace seqlab {

/// Versioned, language-portable container: JSON with base64 little-endian
/// f64 payloads. Round-trips are lossless (bit-exact doubles).
struct Checkpoint {
    int format_version = 1;
    ArchSpec arch;
    ModelDims dims;
    DropoutSpec dropout;
    std::map<std::string, Tensor> params;
    std::vector<std::string> vocab_tokens;
    double best_dev_score = 0.0;
    std::int64_t iteration = 0;
};

Checkpoint make_checkpoint(const Model& model, const Vocabulary& vocab, double best_dev_score,
                           std::int64_t iteration);

std::string checkpoint_to_json(const Checkpoint& ckpt);
Checkpoint checkpoint_from_json(const std::string& text);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

/// Guard for restoring into an explicit architecture; throws ContractError
/// describing the mismatch.
void require_arch_match(const Checkpoint& ckpt, const ArchSpec& arch);

Model model_from_checkpoint(const Checkpoint& ckpt);
Vocabulary vocab_from_checkpoint(const Checkpoint& ckpt);

std::string base64_encode(const unsigned char* data, std::size_t len);
std::vector<unsigned char> base64_decode(const std::string& text);

}  // namespace seqlab
