#include "seqlab/crf.hpp"

#include <limits>

#include "seqlab/errors.hpp"

namespace seqlab {

NodeId crf_nll(Tape& tape, NodeId emissions, const CrfNodeRefs& crf,
               const std::vector<int>& gold_tags) {
    const Tensor& em = tape.value(emissions);
    if (em.rank() != 2 || em.dim(0) < 1) {
        throw ContractError("crf_nll: emissions must be [T, Y] with T >= 1");
    }
    const std::int64_t T = em.dim(0);
    const std::int64_t Y = em.dim(1);
    if (static_cast<std::int64_t>(gold_tags.size()) != T) {
        throw ContractError("crf_nll: gold tag count " + std::to_string(gold_tags.size()) +
                            " != sequence length " + std::to_string(T));
    }
    for (int y : gold_tags) {
        if (y < 0 || y >= Y) throw ContractError("crf_nll: gold tag id out of range");
    }

    // forward recursion: alpha_t[j] = lse_i(alpha_{t-1}[i] + trans[i,j]) + em[t,j]
    const NodeId trans_t = tape.transpose(crf.transitions);  // [to, from]
    NodeId alpha = tape.add(crf.start, tape.row(emissions, 0));
    for (std::int64_t t = 1; t < T; ++t) {
        const NodeId scores = tape.add(trans_t, alpha);  // row-broadcast over "from"
        alpha = tape.add(tape.log_sum_exp_lastdim(scores), tape.row(emissions, t));
    }
    const NodeId log_z = tape.log_sum_exp_lastdim(tape.add(alpha, crf.stop));

    // gold path score
    std::vector<std::int64_t> em_idx(static_cast<std::size_t>(T));
    for (std::int64_t t = 0; t < T; ++t) {
        em_idx[static_cast<std::size_t>(t)] = t * Y + gold_tags[static_cast<std::size_t>(t)];
    }
    NodeId score = tape.sum(tape.gather(emissions, std::move(em_idx)));
    if (T > 1) {
        std::vector<std::int64_t> tr_idx(static_cast<std::size_t>(T - 1));
        for (std::int64_t t = 1; t < T; ++t) {
            tr_idx[static_cast<std::size_t>(t - 1)] =
                static_cast<std::int64_t>(gold_tags[static_cast<std::size_t>(t - 1)]) * Y +
                gold_tags[static_cast<std::size_t>(t)];
        }
        score = tape.add(score, tape.sum(tape.gather(crf.transitions, std::move(tr_idx))));
    }
    score = tape.add(score, tape.gather(crf.start, {gold_tags.front()}));
    score = tape.add(score, tape.gather(crf.stop, {gold_tags.back()}));

    return tape.sub(log_z, score);
}

ViterbiResult viterbi(const Tensor& emissions, const Tensor& transitions, const Tensor& start,
                      const Tensor& stop) {
    if (emissions.rank() != 2 || emissions.dim(0) < 1) {
        throw ContractError("viterbi: emissions must be [T, Y] with T >= 1");
    }
    const std::int64_t T = emissions.dim(0);
    const std::int64_t Y = emissions.dim(1);
    if (transitions.rank() != 2 || transitions.dim(0) != Y || transitions.dim(1) != Y ||
        start.numel() != Y || stop.numel() != Y) {
        throw ShapeError("viterbi: parameter shapes inconsistent with emissions " +
                         emissions.shape_str());
    }

    std::vector<double> score(static_cast<std::size_t>(Y));
    for (std::int64_t j = 0; j < Y; ++j) score[static_cast<std::size_t>(j)] = start[j] + emissions[j];

    std::vector<std::int32_t> backptr(static_cast<std::size_t>((T - 1) * Y), 0);
    std::vector<double> next(static_cast<std::size_t>(Y));
    for (std::int64_t t = 1; t < T; ++t) {
        for (std::int64_t j = 0; j < Y; ++j) {
            double best = -std::numeric_limits<double>::infinity();
            std::int32_t best_i = 0;
            for (std::int64_t i = 0; i < Y; ++i) {
                const double s = score[static_cast<std::size_t>(i)] + transitions[i * Y + j];
                if (s > best) {  // strict: ties keep the lowest previous index
                    best = s;
                    best_i = static_cast<std::int32_t>(i);
                }
            }
            next[static_cast<std::size_t>(j)] = best + emissions[t * Y + j];
            backptr[static_cast<std::size_t>((t - 1) * Y + j)] = best_i;
        }
        score.swap(next);
    }

    ViterbiResult result;
    double best = -std::numeric_limits<double>::infinity();
    std::int64_t best_j = 0;
    for (std::int64_t j = 0; j < Y; ++j) {
        const double s = score[static_cast<std::size_t>(j)] + stop[j];
        if (s > best) {
            best = s;
            best_j = j;
        }
    }
    result.score = best;
    result.tags.assign(static_cast<std::size_t>(T), 0);
    result.tags[static_cast<std::size_t>(T - 1)] = static_cast<int>(best_j);
    for (std::int64_t t = T - 2; t >= 0; --t) {
        result.tags[static_cast<std::size_t>(t)] = backptr[static_cast<std::size_t>(
            t * Y + result.tags[static_cast<std::size_t>(t + 1)])];
    }
    return result;
}

}  // namespace seqlab
