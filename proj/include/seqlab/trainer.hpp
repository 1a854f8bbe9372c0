#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "seqlab/checkpoint.hpp"
#include "seqlab/metrics.hpp"
#include "seqlab/mtl.hpp"

namespace seqlab {

struct OptimConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double clip_norm = 1.0;
    int batch_size = 32;
    std::int64_t max_iters = 10000;  // 20000 for MTL configs
    int patience_epochs = 25;
    std::uint64_t seed = 1;

    void validate() const;
};

struct AdamState {
    std::map<std::string, Tensor> m;
    std::map<std::string, Tensor> v;
    std::int64_t t = 0;
};

double global_norm(const GradMap& grads);
/// Scales every gradient by max_norm/norm when the global L2 norm exceeds
/// max_norm; otherwise leaves them untouched.
void clip_global_norm(GradMap& grads, double max_norm = 1.0);
/// Bias-corrected Adam over exactly the parameters present in `grads`.
/// Throws NumericError naming the parameter on a NaN/Inf gradient.
void adam_step(ParamStore& params, const GradMap& grads, AdamState& state,
               const OptimConfig& cfg);

/// STL: the single task. MTL: strict alternation in task-list order (the
/// auxiliary task is listed first by convention, so it leads).
Task schedule(const ArchSpec& arch, std::int64_t iter);

// ---------------------------------------------------------------------------
// Evaluation during training

struct EvalScores {
    RoleScore holder;
    RoleScore target;
    double mean_prop_f1 = 0.0;  // selection score
};

EvalScores evaluate_orl(const Model& model, const std::vector<RoleInstance>& dev,
                        const Vocabulary& vocab, const EmbeddingMatrix& emb);

double mean_dev_loss(const Model& model, const std::vector<RoleInstance>& dev,
                     const Vocabulary& vocab, const EmbeddingMatrix& emb);

// ---------------------------------------------------------------------------
// Training

struct TrainTaskData {
    Task task = Task::ORL;
    std::vector<RoleInstance> train;
    std::vector<RoleInstance> dev;
};

struct TrainData {
    std::vector<TrainTaskData> tasks;  // order matches the arch task order
    Vocabulary vocab;
    EmbeddingMatrix embeddings;
    Task selection_task = Task::ORL;

    const TrainTaskData& of(Task t) const;
};

struct TrainRecord {
    std::int64_t iteration = 0;
    std::map<std::string, double> train_loss;  // per task, mean since last tick
    EvalScores dev;
    bool has_aux_dev_loss = false;
    double aux_dev_loss = 0.0;
    double best_score = 0.0;
    bool improved = false;
};

struct TrainLog {
    std::vector<TrainRecord> records;
    std::string to_jsonl() const;
};

struct StepProbe {
    std::int64_t iteration = 0;
    Task task = Task::ORL;
    double loss = 0.0;
    double grad_norm_pre_clip = 0.0;
    double grad_norm_post_clip = 0.0;
};

struct TrainHooks {
    std::function<void(const StepProbe&)> on_step;
    std::function<void(const TrainRecord&)> on_tick;
    /// Test stub; replaces the real dev evaluation when set.
    std::function<EvalScores(const Model&, std::int64_t iteration)> evaluator;
};

struct TrainResult {
    Checkpoint best;
    TrainLog log;
    std::int64_t iterations_run = 0;
    bool stopped_early = false;
};

/// The full protocol: alternating task batches, global-norm clipping before
/// every Adam update, dev evaluation each ceil(train/batch) iterations,
/// checkpoint on strict improvement of mean proportional F1 (holder,
/// target), early stop after `patience_epochs` improvement-free ticks.
TrainResult train(Model& model, const TrainData& data, const OptimConfig& cfg,
                  const TrainHooks& hooks = {});

}  // namespace seqlab
