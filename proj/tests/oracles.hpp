// Independent reference implementations used as test oracles. These stay
// deliberately naive (enumeration, scalar loops, token counting) so they
// share no code with the library paths they check.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "seqlab/tensor.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Brute-force linear-chain CRF: enumerate all Y^T paths.

struct CrfEnumeration {
    double log_z = 0.0;
    double best_score = 0.0;
    std::vector<int> best_path;  // lexicographically first among maximizers
};

inline double path_score(const std::vector<int>& path, const seqlab::Tensor& em,
                         const seqlab::Tensor& trans, const seqlab::Tensor& start,
                         const seqlab::Tensor& stop) {
    const std::int64_t T = em.dim(0), Y = em.dim(1);
    double s = start[path[0]] + em[0 * Y + path[0]];
    for (std::int64_t t = 1; t < T; ++t) {
        s += trans[path[static_cast<std::size_t>(t - 1)] * Y + path[static_cast<std::size_t>(t)]];
        s += em[t * Y + path[static_cast<std::size_t>(t)]];
    }
    s += stop[path[static_cast<std::size_t>(T - 1)]];
    return s;
}

inline CrfEnumeration enumerate_crf(const seqlab::Tensor& em, const seqlab::Tensor& trans,
                                    const seqlab::Tensor& start, const seqlab::Tensor& stop) {
    const std::int64_t T = em.dim(0), Y = em.dim(1);
    std::vector<int> path(static_cast<std::size_t>(T), 0);
    std::vector<double> scores;
    CrfEnumeration out;
    out.best_score = -1e300;
    for (;;) {
        const double s = path_score(path, em, trans, start, stop);
        scores.push_back(s);
        if (s > out.best_score) {  // strict: first maximizer in lexicographic order wins
            out.best_score = s;
            out.best_path = path;
        }
        // next path in lexicographic order (leftmost position most significant)
        std::int64_t pos = T - 1;
        while (pos >= 0) {
            if (++path[static_cast<std::size_t>(pos)] < Y) break;
            path[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) break;
    }
    double mx = scores[0];
    for (double s : scores) mx = std::max(mx, s);
    double sum = 0.0;
    for (double s : scores) sum += std::exp(s - mx);
    out.log_z = mx + std::log(sum);
    return out;
}

// ---------------------------------------------------------------------------
// Central finite differences for an arbitrary scalar function of one tensor
// entry.

template <typename F>
double central_diff(F&& f, double& slot, double eps) {
    const double saved = slot;
    slot = saved + eps;
    const double lp = f();
    slot = saved - eps;
    const double lm = f();
    slot = saved;
    return (lp - lm) / (2.0 * eps);
}

// ---------------------------------------------------------------------------
// Scalar LSTM step, one hidden unit at a time.

struct ScalarLstmOut {
    std::vector<double> h, c;
};

inline ScalarLstmOut scalar_lstm_step(const std::vector<double>& x, const std::vector<double>& h0,
                                      const std::vector<double>& c0,
                                      const seqlab::Tensor& w_x, const seqlab::Tensor& w_h,
                                      const seqlab::Tensor& b, int H) {
    auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    const std::int64_t D = w_x.dim(0);
    std::vector<double> gates(static_cast<std::size_t>(4 * H), 0.0);
    for (int g = 0; g < 4 * H; ++g) {
        double acc = b[g];
        for (std::int64_t k = 0; k < D; ++k) acc += x[static_cast<std::size_t>(k)] * w_x[k * 4 * H + g];
        for (int k = 0; k < H; ++k) acc += h0[static_cast<std::size_t>(k)] * w_h[k * 4 * H + g];
        gates[static_cast<std::size_t>(g)] = acc;
    }
    ScalarLstmOut out;
    out.h.resize(static_cast<std::size_t>(H));
    out.c.resize(static_cast<std::size_t>(H));
    for (int j = 0; j < H; ++j) {
        const double i = sig(gates[static_cast<std::size_t>(j)]);
        const double f = sig(gates[static_cast<std::size_t>(H + j)]);
        const double g = std::tanh(gates[static_cast<std::size_t>(2 * H + j)]);
        const double o = sig(gates[static_cast<std::size_t>(3 * H + j)]);
        out.c[static_cast<std::size_t>(j)] = f * c0[static_cast<std::size_t>(j)] + i * g;
        out.h[static_cast<std::size_t>(j)] = o * std::tanh(out.c[static_cast<std::size_t>(j)]);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Token-level span scoring by explicit counting over a bounded token range.

struct TokenCounts {
    long long pred_spans_hit = 0, pred_spans = 0;
    long long gold_spans_hit = 0, gold_spans = 0;
    // per-span (covered tokens, span length), in input order
    std::vector<std::pair<long long, long long>> pred_fractions;
    std::vector<std::pair<long long, long long>> gold_fractions;
};

inline TokenCounts count_tokens(const std::vector<std::pair<int, int>>& pred,
                                const std::vector<std::pair<int, int>>& gold, int max_token) {
    std::vector<char> in_pred(static_cast<std::size_t>(max_token + 1), 0);
    std::vector<char> in_gold(static_cast<std::size_t>(max_token + 1), 0);
    for (const auto& [s, e] : pred)
        for (int t = s; t <= e; ++t) in_pred[static_cast<std::size_t>(t)] = 1;
    for (const auto& [s, e] : gold)
        for (int t = s; t <= e; ++t) in_gold[static_cast<std::size_t>(t)] = 1;

    TokenCounts c;
    c.pred_spans = static_cast<long long>(pred.size());
    c.gold_spans = static_cast<long long>(gold.size());
    for (const auto& [s, e] : pred) {
        long long hit = 0;
        for (int t = s; t <= e; ++t) {
            if (in_gold[static_cast<std::size_t>(t)]) ++hit;
        }
        c.pred_fractions.emplace_back(hit, e - s + 1);
        if (hit > 0) ++c.pred_spans_hit;
    }
    for (const auto& [s, e] : gold) {
        long long hit = 0;
        for (int t = s; t <= e; ++t) {
            if (in_pred[static_cast<std::size_t>(t)]) ++hit;
        }
        c.gold_fractions.emplace_back(hit, e - s + 1);
        if (hit > 0) ++c.gold_spans_hit;
    }
    return c;
}

}  // namespace oracle
