#pragma once

#include <string>
#include <vector>

#include "seqlab/config.hpp"
#include "seqlab/synth.hpp"

namespace seqlab {

/// Everything cmd_train / cmd_crossval need from disk, assembled per config.
struct LoadedData {
    ArchSpec arch;
    TrainData data;
    std::vector<RoleInstance> orl_test;
};

LoadedData load_train_data(const RunConfig& cfg);

/// Arch spec for one architecture kind in a cross-validation sweep: STL uses
/// the ORL task alone, MTL kinds pair SRL (listed first) with ORL.
ArchSpec cv_arch_spec(const std::string& kind, const RunConfig& cfg,
                      const LabelScheme& srl_scheme);

int cmd_train(const RunConfig& cfg, bool dry_run);
int cmd_crossval(const RunConfig& cfg);

struct PredictArgs {
    std::string checkpoint;
    std::string input;
    std::string output;
    std::string embeddings;
    std::string format = "orl";  // "orl" or "srl"
};
int cmd_predict(const PredictArgs& args);
int cmd_eval(const PredictArgs& args);

struct GradcheckArgs {
    std::string arch_kind = "STL";
    int hidden = 8;
    int emb_dim = 8;
    int seq_len = 5;
    double epsilon = 1e-5;
    std::uint64_t seed = 7;
};
int cmd_gradcheck(const GradcheckArgs& args);

int cmd_synth(const SynthSpec& spec, const std::string& out_dir, int emb_dim);

struct StabilityArgs {
    std::vector<std::string> dumps;
    std::string gold;
    int trials = 8;
    std::string output;
};
int cmd_stability(const StabilityArgs& args);

}  // namespace seqlab
