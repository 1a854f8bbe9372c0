#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqlab/sequence_model.hpp"
#include "seqlab/trainer.hpp"

namespace seqlab {

struct PathsConfig {
    std::string srl_train;
    std::string srl_dev;
    std::string srl_test;
    std::string orl_train;
    std::string orl_dev;   // defaults to orl_train when empty
    std::string orl_test;
    std::string orl_json;  // whole corpus for cross-validation
    std::string embeddings;
    std::string output_dir = "out";
};

struct CvConfig {
    int k = 4;
    int dev_count = 100;
    std::vector<std::uint64_t> seeds = {1, 2};
    std::vector<std::string> archs = {"STL", "FS"};
    int jobs = 1;
};

struct ArchConfig {
    std::string kind = "STL";
    std::vector<std::string> tasks = {"orl"};
    int h_mtl_tap_layer = 2;
    double adv_scale = 0.1;
};

/// Everything a run needs; defaults follow the training recipe (Adam 1e-3,
/// batch 32, clip 1.0, patience 25, H=100, 3 layers, 100d embeddings,
/// dropout keeps 0.7/0.85). max_iters = 0 means auto: 10000 for STL, 20000
/// for MTL.
struct RunConfig {
    ArchConfig arch;
    ModelDims model;
    DropoutSpec dropout;
    OptimConfig optim;
    PathsConfig paths;
    CvConfig cv;
};

RunConfig default_config();

/// Parse config text over the defaults, then apply "key.path=value"
/// overrides (flags > file > defaults). Unknown keys anywhere are rejected.
/// Every nonempty path referenced by the config must exist.
RunConfig resolve_config(const std::string& json_text, const std::vector<std::string>& overrides);
RunConfig load_config(const std::string& path, const std::vector<std::string>& overrides);

/// The fully resolved config, echoed into output dirs for reproducibility.
std::string config_to_json(const RunConfig& cfg);

}  // namespace seqlab
