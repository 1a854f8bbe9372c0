#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "seqlab/corpus.hpp"
#include "seqlab/crf.hpp"
#include "seqlab/sequence_model.hpp"
#include "seqlab/tape.hpp"

namespace seqlab {

enum class ArchKind { STL, FS, H, SP, ASP };

std::string arch_kind_name(ArchKind k);
ArchKind arch_kind_from_name(const std::string& s);

struct TaskSpec {
    Task task = Task::ORL;
    LabelScheme scheme;
};

/// Which multi-task wiring to build. For H the first task in `tasks` is the
/// low-level one supervised at `h_mtl_tap_layer`; all other heads read the
/// top layer.
struct ArchSpec {
    ArchKind kind = ArchKind::STL;
    std::vector<TaskSpec> tasks;
    int h_mtl_tap_layer = 2;
    double adv_scale = 0.1;

    void validate(int n_layers) const;
    int task_index(Task t) const;  // throws ContractError on unknown task
    const TaskSpec& spec_of(Task t) const { return tasks[static_cast<std::size_t>(task_index(t))]; }
    bool has_private_stacks() const { return kind == ArchKind::SP || kind == ArchKind::ASP; }
};

/// Parameter groups:
///   shared/enc/...          the shared encoder stack
///   task/<name>/enc/...     private stacks (SP/ASP only)
///   task/<name>/emit/...    emission projection
///   task/<name>/crf/...     transition/start/stop scores
///   disc/...                task discriminator (ASP only)
struct Model {
    ArchSpec arch;
    ModelDims dims;
    DropoutSpec dropout;
    ParamStore params;

    int emission_input_dim() const {
        return arch.has_private_stacks() ? 4 * dims.hidden : 2 * dims.hidden;
    }
};

Model build_model(const ArchSpec& arch, const ModelDims& dims, const DropoutSpec& dropout,
                  std::uint64_t seed);

std::string task_param_prefix(Task t);

struct ForwardOptions {
    bool train = false;
    RngStream* rng = nullptr;
    bool bypass_grl = false;  // diagnostic: route the discriminator around the
                              // reversal layer to compare gradients
};

struct TaskForwardResult {
    Task task = Task::ORL;
    NodeId emissions = -1;            // [T, Y_task]
    std::vector<NodeId> shared_top;   // [T] nodes of [2H]
    std::vector<NodeId> private_top;  // SP/ASP only
    NodeId discriminator_logits = -1; // ASP only, [n_tasks]
    CrfNodeRefs crf;
};

TaskForwardResult forward_task(Tape& tape, const Model& model, const Tensor& features,
                               Task task, const ForwardOptions& opts);

/// Per-instance CRF negative log-likelihood.
NodeId task_loss(Tape& tape, const TaskForwardResult& result, const std::vector<int>& gold_tags);

/// Cross-entropy of the discriminator logits against the true task id. Only
/// meaningful for ASP results.
NodeId adversarial_loss(Tape& tape, const Model& model, const TaskForwardResult& result,
                        Task true_task);

/// Names of the parameters a gradient step on `current_task` may update:
/// the shared group, the current task's group, and (ASP) the discriminator.
std::vector<std::string> trainable_parameters(const Model& model, Task current_task);

/// Decode one instance to role spans (eval mode).
std::vector<RoleSpan> predict_roles(const Model& model, const RoleInstance& inst,
                                    const Vocabulary& vocab, const EmbeddingMatrix& emb);

/// Emission scores for one instance in eval mode (decode path).
Tensor compute_emissions(const Model& model, const RoleInstance& inst, const Vocabulary& vocab,
                         const EmbeddingMatrix& emb);

}  // namespace seqlab
