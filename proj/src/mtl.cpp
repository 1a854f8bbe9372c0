#include "seqlab/mtl.hpp"

#include <algorithm>

#include "seqlab/errors.hpp"

namespace seqlab {

std::string arch_kind_name(ArchKind k) {
    switch (k) {
        case ArchKind::STL: return "STL";
        case ArchKind::FS: return "FS";
        case ArchKind::H: return "H";
        case ArchKind::SP: return "SP";
        case ArchKind::ASP: return "ASP";
    }
    return "?";
}

ArchKind arch_kind_from_name(const std::string& s) {
    if (s == "STL") return ArchKind::STL;
    if (s == "FS") return ArchKind::FS;
    if (s == "H") return ArchKind::H;
    if (s == "SP") return ArchKind::SP;
    if (s == "ASP") return ArchKind::ASP;
    throw ContractError("unknown architecture kind: " + s);
}

void ArchSpec::validate(int n_layers) const {
    if (tasks.empty()) throw ContractError("ArchSpec: no tasks");
    if (kind == ArchKind::STL && tasks.size() != 1) {
        throw ContractError("ArchSpec: STL must have exactly one task");
    }
    if (kind != ArchKind::STL && tasks.size() < 2) {
        throw ContractError("ArchSpec: MTL needs at least two tasks");
    }
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        for (std::size_t j = i + 1; j < tasks.size(); ++j) {
            if (tasks[i].task == tasks[j].task) {
                throw ContractError("ArchSpec: duplicate task " + task_name(tasks[i].task));
            }
        }
        validate_scheme(tasks[i].scheme);
    }
    if (kind == ArchKind::H && (h_mtl_tap_layer < 1 || h_mtl_tap_layer >= n_layers)) {
        throw ContractError("ArchSpec: H tap layer must be in [1, " + std::to_string(n_layers) +
                            ")");
    }
    if (kind == ArchKind::ASP && !(adv_scale > 0.0)) {
        throw ContractError("ArchSpec: adv_scale must be > 0");
    }
}

int ArchSpec::task_index(Task t) const {
    for (std::size_t i = 0; i < tasks.size(); ++i) {
        if (tasks[i].task == t) return static_cast<int>(i);
    }
    throw ContractError("ArchSpec: unknown task " + task_name(t));
}

std::string task_param_prefix(Task t) { return "task/" + task_name(t); }

Model build_model(const ArchSpec& arch, const ModelDims& dims, const DropoutSpec& dropout,
                  std::uint64_t seed) {
    dims.validate();
    dropout.validate();
    arch.validate(dims.layers);

    Model model;
    model.arch = arch;
    model.dims = dims;
    model.dropout = dropout;

    RngStream init(seed, "init");
    RngStream shared_rng = init.fork("shared");
    init_encoder_stack(model.params, "shared/enc", dims.feature_dim(), dims.hidden, dims.layers,
                       shared_rng);

    const int emit_in = arch.has_private_stacks() ? 4 * dims.hidden : 2 * dims.hidden;
    for (const auto& ts : arch.tasks) {
        const std::string prefix = task_param_prefix(ts.task);
        RngStream task_rng = init.fork(prefix);
        if (arch.has_private_stacks()) {
            init_encoder_stack(model.params, prefix + "/enc", dims.feature_dim(), dims.hidden,
                               dims.layers, task_rng);
        }
        const int n_tags = ts.scheme.size();
        model.params.create(prefix + "/emit/W", he_init(emit_in, n_tags, task_rng));
        model.params.create(prefix + "/emit/b", Tensor::zeros({n_tags}));
        // transition scores start at zero: every path begins equiprobable
        model.params.create(prefix + "/crf/trans", Tensor::zeros({n_tags, n_tags}));
        model.params.create(prefix + "/crf/start", Tensor::zeros({n_tags}));
        model.params.create(prefix + "/crf/stop", Tensor::zeros({n_tags}));
    }

    if (arch.kind == ArchKind::ASP) {
        RngStream disc_rng = init.fork("disc");
        const int n_tasks = static_cast<int>(arch.tasks.size());
        model.params.create("disc/W", he_init(2 * dims.hidden, n_tasks, disc_rng));
        model.params.create("disc/b", Tensor::zeros({n_tasks}));
    }
    return model;
}

namespace {

NodeId emissions_from_states(Tape& tape, const std::vector<NodeId>& states,
                             const std::string& head_prefix, const Model& model,
                             const ForwardOptions& opts) {
    NodeId w = tape.param(head_prefix + "/emit/W");
    const NodeId b = tape.param(head_prefix + "/emit/b");
    if (opts.train && model.dropout.classifier_keep < 1.0) {
        // standard dropout on the classifier weights, one mask per forward
        Tensor m = dropout_mask(tape.value(w).shape(), model.dropout.classifier_keep, *opts.rng);
        w = tape.pointwise_mask(w, std::move(m));
    }
    std::vector<NodeId> rows;
    rows.reserve(states.size());
    for (const NodeId s : states) rows.push_back(tape.add(tape.vecmat(s, w), b));
    return tape.stack_rows(rows);
}

NodeId mean_pool(Tape& tape, const std::vector<NodeId>& states) {
    NodeId acc = states[0];
    for (std::size_t t = 1; t < states.size(); ++t) acc = tape.add(acc, states[t]);
    return tape.scale(acc, 1.0 / static_cast<double>(states.size()));
}

}  // namespace

TaskForwardResult forward_task(Tape& tape, const Model& model, const Tensor& features,
                               Task task, const ForwardOptions& opts) {
    const ArchSpec& arch = model.arch;
    const int ti = arch.task_index(task);

    EncodeOptions enc_opts;
    enc_opts.train = opts.train;
    enc_opts.dropout = model.dropout;
    enc_opts.rng = opts.rng;

    const EncodeResult shared = encode(tape, features, "shared/enc", model.dims, enc_opts);

    TaskForwardResult result;
    result.task = task;
    result.shared_top = shared.top();

    const std::string prefix = task_param_prefix(task);
    std::vector<NodeId> head_states;
    switch (arch.kind) {
        case ArchKind::STL:
        case ArchKind::FS:
            head_states = shared.top();
            break;
        case ArchKind::H:
            // the first task is the low-level one; it reads the tap layer
            head_states = (ti == 0) ? shared.layer(arch.h_mtl_tap_layer) : shared.top();
            break;
        case ArchKind::SP:
        case ArchKind::ASP: {
            const EncodeResult priv =
                encode(tape, features, prefix + "/enc", model.dims, enc_opts);
            result.private_top = priv.top();
            head_states.reserve(result.shared_top.size());
            for (std::size_t t = 0; t < result.shared_top.size(); ++t) {
                head_states.push_back(
                    tape.concat_lastdim(result.shared_top[t], result.private_top[t]));
            }
            break;
        }
    }

    result.emissions = emissions_from_states(tape, head_states, prefix, model, opts);
    result.crf = CrfNodeRefs{tape.param(prefix + "/crf/trans"), tape.param(prefix + "/crf/start"),
                             tape.param(prefix + "/crf/stop")};

    if (arch.kind == ArchKind::ASP) {
        NodeId pooled = mean_pool(tape, result.shared_top);
        if (!opts.bypass_grl) {
            pooled = tape.gradient_reversal(pooled, arch.adv_scale);
        }
        result.discriminator_logits =
            tape.add(tape.vecmat(pooled, tape.param("disc/W")), tape.param("disc/b"));
    }
    return result;
}

NodeId task_loss(Tape& tape, const TaskForwardResult& result, const std::vector<int>& gold_tags) {
    return crf_nll(tape, result.emissions, result.crf, gold_tags);
}

NodeId adversarial_loss(Tape& tape, const Model& model, const TaskForwardResult& result,
                        Task true_task) {
    if (model.arch.kind != ArchKind::ASP || result.discriminator_logits < 0) {
        throw ContractError("adversarial_loss: only defined for ASP forward results");
    }
    const int ti = model.arch.task_index(true_task);
    const NodeId logits = result.discriminator_logits;
    const NodeId log_z = tape.log_sum_exp_lastdim(logits);
    const NodeId picked = tape.gather(logits, {ti});
    return tape.sub(log_z, picked);
}

std::vector<std::string> trainable_parameters(const Model& model, Task current_task) {
    model.arch.task_index(current_task);  // validates
    std::vector<std::string> prefixes = {"shared/", task_param_prefix(current_task) + "/"};
    if (model.arch.kind == ArchKind::ASP) prefixes.push_back("disc/");
    std::vector<std::string> names;
    for (const auto& [name, value] : model.params.values()) {
        for (const auto& p : prefixes) {
            if (name.rfind(p, 0) == 0) {
                names.push_back(name);
                break;
            }
        }
    }
    return names;
}

Tensor compute_emissions(const Model& model, const RoleInstance& inst, const Vocabulary& vocab,
                         const EmbeddingMatrix& emb) {
    const Tensor features = assemble_features(inst, vocab, emb, model.dims.context_window,
                                              model.dims.indicator_window);
    Tape tape(const_cast<ParamStore*>(&model.params));
    ForwardOptions opts;  // eval mode
    const TaskForwardResult r = forward_task(tape, model, features, inst.task, opts);
    return tape.value(r.emissions);
}

std::vector<RoleSpan> predict_roles(const Model& model, const RoleInstance& inst,
                                    const Vocabulary& vocab, const EmbeddingMatrix& emb) {
    const Tensor em = compute_emissions(model, inst, vocab, emb);
    const std::string prefix = task_param_prefix(inst.task);
    const ViterbiResult vit =
        viterbi(em, model.params.get(prefix + "/crf/trans"), model.params.get(prefix + "/crf/start"),
                model.params.get(prefix + "/crf/stop"));
    const LabelScheme& scheme = model.arch.spec_of(inst.task).scheme;
    return decode_bio(ids_to_tags(vit.tags, scheme));
}

}  // namespace seqlab
