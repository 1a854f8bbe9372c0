#include "seqlab/trainer.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "seqlab/errors.hpp"

namespace seqlab {

using nlohmann::json;

void OptimConfig::validate() const {
    if (!(lr > 0) || !(beta1 > 0) || !(beta2 > 0) || !(eps > 0) || !(clip_norm > 0)) {
        throw ContractError("OptimConfig: rates and bounds must be positive");
    }
    if (beta1 >= 1.0 || beta2 >= 1.0) throw ContractError("OptimConfig: betas must be < 1");
    if (batch_size < 1 || max_iters < 1) {
        throw ContractError("OptimConfig: batch_size and max_iters must be positive");
    }
    if (patience_epochs < 1) throw ContractError("OptimConfig: patience must be >= 1");
}

double global_norm(const GradMap& grads) {
    double ss = 0.0;
    for (const auto& [name, g] : grads) {
        for (std::int64_t i = 0; i < g.numel(); ++i) ss += g[i] * g[i];
    }
    return std::sqrt(ss);
}

void clip_global_norm(GradMap& grads, double max_norm) {
    const double norm = global_norm(grads);
    if (norm <= max_norm) return;
    const double factor = max_norm / norm;
    for (auto& [name, g] : grads) {
        for (std::int64_t i = 0; i < g.numel(); ++i) g[i] *= factor;
    }
}

void adam_step(ParamStore& params, const GradMap& grads, AdamState& state,
               const OptimConfig& cfg) {
    state.t += 1;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.t));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.t));
    for (const auto& [name, g] : grads) {
        if (!g.all_finite()) {
            throw NumericError("adam_step: non-finite gradient for parameter " + name);
        }
        Tensor& theta = params.get(name);
        require_same_shape(theta, g, "adam_step");
        auto mit = state.m.find(name);
        if (mit == state.m.end()) {
            mit = state.m.emplace(name, Tensor::zeros(theta.shape())).first;
            state.v.emplace(name, Tensor::zeros(theta.shape()));
        }
        Tensor& m = mit->second;
        Tensor& v = state.v.at(name);
        for (std::int64_t i = 0; i < theta.numel(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g[i] * g[i];
            const double m_hat = m[i] / bc1;
            const double v_hat = v[i] / bc2;
            theta[i] -= cfg.lr * m_hat / (std::sqrt(v_hat) + cfg.eps);
        }
    }
}

Task schedule(const ArchSpec& arch, std::int64_t iter) {
    if (iter < 0) throw ContractError("schedule: iter must be >= 0");
    if (arch.kind == ArchKind::STL) return arch.tasks[0].task;
    const std::size_t n = arch.tasks.size();
    return arch.tasks[static_cast<std::size_t>(iter % static_cast<std::int64_t>(n))].task;
}

// ---------------------------------------------------------------------------
// Evaluation

EvalScores evaluate_orl(const Model& model, const std::vector<RoleInstance>& dev,
                        const Vocabulary& vocab, const EmbeddingMatrix& emb) {
    SpanScorer scorer;
    for (const auto& inst : dev) {
        const std::vector<RoleSpan> pred = predict_roles(model, inst, vocab, emb);
        scorer.add(spans_by_role(pred), spans_by_role(inst.roles));
    }
    EvalScores s;
    s.holder = scorer.role("H");
    s.target = scorer.role("T");
    s.mean_prop_f1 = 0.5 * (s.holder.prop.prf().f1 + s.target.prop.prf().f1);
    return s;
}

double mean_dev_loss(const Model& model, const std::vector<RoleInstance>& dev,
                     const Vocabulary& vocab, const EmbeddingMatrix& emb) {
    if (dev.empty()) throw ContractError("mean_dev_loss: empty dev set");
    double total = 0.0;
    for (const auto& inst : dev) {
        const Tensor features = assemble_features(inst, vocab, emb, model.dims.context_window,
                                                  model.dims.indicator_window);
        Tape tape(const_cast<ParamStore*>(&model.params));
        ForwardOptions opts;
        const TaskForwardResult r = forward_task(tape, model, features, inst.task, opts);
        const LabelScheme& scheme = model.arch.spec_of(inst.task).scheme;
        const NodeId loss = task_loss(tape, r, tags_to_ids(inst.tags, scheme));
        total += tape.scalar_value(loss);
    }
    return total / static_cast<double>(dev.size());
}

// ---------------------------------------------------------------------------
// Training

const TrainTaskData& TrainData::of(Task t) const {
    for (const auto& td : tasks) {
        if (td.task == t) return td;
    }
    throw ContractError("TrainData: no data for task " + task_name(t));
}

std::string TrainLog::to_jsonl() const {
    std::string out;
    for (const auto& rec : records) {
        json j;
        j["iteration"] = rec.iteration;
        j["train_loss"] = rec.train_loss;
        j["dev"] = {
            {"holder",
             {{"binary_f1", rec.dev.holder.binary.prf().f1},
              {"prop_f1", rec.dev.holder.prop.prf().f1}}},
            {"target",
             {{"binary_f1", rec.dev.target.binary.prf().f1},
              {"prop_f1", rec.dev.target.prop.prf().f1}}},
        };
        j["mean_prop_f1"] = rec.dev.mean_prop_f1;
        if (rec.has_aux_dev_loss) j["aux_dev_loss"] = rec.aux_dev_loss;
        j["best_score"] = rec.best_score;
        j["improved"] = rec.improved;
        out += j.dump();
        out += "\n";
    }
    return out;
}

namespace {

struct BatchCursor {
    const TrainTaskData* data = nullptr;
    const LabelScheme* scheme = nullptr;
    std::vector<PaddedBatch> batches;
    std::size_t pos = 0;
    std::int64_t epoch = 0;
};

const PaddedBatch& next_batch(BatchCursor& cur, const TrainData& data, const OptimConfig& cfg) {
    if (cur.pos >= cur.batches.size()) {
        const std::uint64_t epoch_seed =
            RngStream(cfg.seed, "shuffle/" + task_name(cur.data->task) + "/" +
                                    std::to_string(cur.epoch))
                .next_u64();
        cur.batches = make_batches(cur.data->train, *cur.scheme, data.vocab, cfg.batch_size,
                                   epoch_seed);
        cur.pos = 0;
        ++cur.epoch;
    }
    return cur.batches[cur.pos++];
}

}  // namespace

TrainResult train(Model& model, const TrainData& data, const OptimConfig& cfg,
                  const TrainHooks& hooks) {
    cfg.validate();
    const ArchSpec& arch = model.arch;
    const TrainTaskData& selection = data.of(data.selection_task);
    if (selection.dev.empty() && !hooks.evaluator) {
        throw ContractError("train: selection dev set must be nonempty");
    }
    if (selection.train.empty()) throw ContractError("train: selection train set must be nonempty");

    // dev evaluation cadence: one "epoch" of the selection task
    const std::int64_t cadence =
        (static_cast<std::int64_t>(selection.train.size()) + cfg.batch_size - 1) /
        cfg.batch_size;

    std::vector<BatchCursor> cursors;
    for (const auto& ts : arch.tasks) {
        BatchCursor cur;
        cur.data = &data.of(ts.task);
        cur.scheme = &ts.scheme;
        if (cur.data->train.empty()) {
            throw ContractError("train: empty training data for task " + task_name(ts.task));
        }
        cursors.push_back(std::move(cur));
    }

    RngStream dropout_rng(cfg.seed, "dropout");
    AdamState adam;
    TrainResult result;
    double best_score = -1.0;
    int ticks_since_improve = 0;
    std::map<std::string, double> loss_sums;
    std::map<std::string, std::int64_t> loss_counts;

    const auto evaluate = [&](std::int64_t iteration) {
        return hooks.evaluator
                   ? hooks.evaluator(model, iteration)
                   : evaluate_orl(model, selection.dev, data.vocab, data.embeddings);
    };

    const bool has_aux_dev = [&]() {
        for (const auto& td : data.tasks) {
            if (td.task != data.selection_task && !td.dev.empty()) return true;
        }
        return false;
    }();

    std::int64_t iter = 0;
    for (; iter < cfg.max_iters; ++iter) {
        const Task task = schedule(arch, iter);
        BatchCursor& cur = cursors[static_cast<std::size_t>(arch.task_index(task))];
        const PaddedBatch& batch = next_batch(cur, data, cfg);

        Tape tape(&model.params);
        ForwardOptions opts;
        opts.train = true;
        opts.rng = &dropout_rng;
        NodeId loss = -1;
        for (int row = 0; row < batch.rows; ++row) {
            const RoleInstance& inst =
                cur.data->train[static_cast<std::size_t>(batch.instance_indices[static_cast<std::size_t>(row)])];
            const Tensor features = assemble_features(
                inst, data.vocab, data.embeddings, model.dims.context_window,
                model.dims.indicator_window);
            const TaskForwardResult fwd = forward_task(tape, model, features, task, opts);
            NodeId inst_loss = task_loss(tape, fwd, tags_to_ids(inst.tags, *cur.scheme));
            if (arch.kind == ArchKind::ASP) {
                inst_loss = tape.add(inst_loss, adversarial_loss(tape, model, fwd, task));
            }
            loss = (loss < 0) ? inst_loss : tape.add(loss, inst_loss);
        }
        loss = tape.scale(loss, 1.0 / static_cast<double>(batch.rows));
        const double loss_value = tape.scalar_value(loss);
        if (!std::isfinite(loss_value)) {
            throw NumericError("train: non-finite loss at iteration " + std::to_string(iter));
        }
        tape.backward(loss);
        GradMap grads = tape.param_grads();

        const double pre_norm = global_norm(grads);
        clip_global_norm(grads, cfg.clip_norm);
        const double post_norm = global_norm(grads);
        adam_step(model.params, grads, adam, cfg);

        loss_sums[task_name(task)] += loss_value;
        loss_counts[task_name(task)] += 1;
        if (hooks.on_step) {
            hooks.on_step(StepProbe{iter, task, loss_value, pre_norm, post_norm});
        }

        if ((iter + 1) % cadence == 0) {
            TrainRecord rec;
            rec.iteration = iter + 1;
            for (const auto& [k, v] : loss_sums) {
                rec.train_loss[k] = v / static_cast<double>(loss_counts[k]);
            }
            loss_sums.clear();
            loss_counts.clear();
            rec.dev = evaluate(iter + 1);
            if (has_aux_dev && !hooks.evaluator) {
                double total = 0.0;
                int count = 0;
                for (const auto& td : data.tasks) {
                    if (td.task == data.selection_task || td.dev.empty()) continue;
                    total += mean_dev_loss(model, td.dev, data.vocab, data.embeddings);
                    ++count;
                }
                rec.has_aux_dev_loss = count > 0;
                rec.aux_dev_loss = count > 0 ? total / count : 0.0;
            }
            rec.improved = rec.dev.mean_prop_f1 > best_score;
            if (rec.improved) {
                best_score = rec.dev.mean_prop_f1;
                result.best = make_checkpoint(model, data.vocab, best_score, iter + 1);
                ticks_since_improve = 0;
            } else {
                ++ticks_since_improve;
            }
            rec.best_score = best_score;
            if (hooks.on_tick) hooks.on_tick(rec);
            result.log.records.push_back(std::move(rec));
            if (ticks_since_improve >= cfg.patience_epochs) {
                result.stopped_early = true;
                ++iter;
                break;
            }
        }
    }
    result.iterations_run = iter;

    if (result.log.records.empty()) {
        // max_iters below one cadence: still evaluate and checkpoint once
        TrainRecord rec;
        rec.iteration = iter;
        rec.dev = evaluate(iter);
        rec.improved = true;
        best_score = rec.dev.mean_prop_f1;
        rec.best_score = best_score;
        result.best = make_checkpoint(model, data.vocab, best_score, iter);
        result.log.records.push_back(std::move(rec));
    }
    return result;
}

}  // namespace seqlab
