#include "seqlab/sequence_model.hpp"

#include <algorithm>
#include <cmath>

#include "seqlab/errors.hpp"

namespace seqlab {

void ModelDims::validate() const {
    if (emb_dim < 1 || hidden < 1 || layers < 1 || context_window < 0 || indicator_window < 0) {
        throw ContractError("ModelDims: all sizes must be positive");
    }
}

void DropoutSpec::validate() const {
    for (double k : {input_keep, recurrent_keep, output_keep, classifier_keep}) {
        if (!(k > 0.0) || k > 1.0) {
            throw ContractError("DropoutSpec: keep probabilities must be in (0,1]");
        }
    }
}

// ---------------------------------------------------------------------------
// Features

std::vector<int> indicator_vector(int length, Span trigger, int indicator_window) {
    std::vector<int> ind(static_cast<std::size_t>(length), 0);
    const int lo = std::max(0, trigger.start - indicator_window);
    const int hi = std::min(length - 1, trigger.end + indicator_window);
    for (int i = lo; i <= hi; ++i) ind[static_cast<std::size_t>(i)] = 1;
    return ind;
}

Tensor assemble_features(const RoleInstance& inst, const Vocabulary& vocab,
                         const EmbeddingMatrix& emb, int context_window,
                         int indicator_window) {
    const int T = inst.length();
    const int d = emb.dim;
    const int F = 3 * d + 1;

    auto mean_embedding = [&](int lo, int hi) {
        std::vector<double> m(static_cast<std::size_t>(d), 0.0);
        const int n = hi - lo + 1;
        for (int i = lo; i <= hi; ++i) {
            const int id = vocab.lookup(inst.sentence->tokens[static_cast<std::size_t>(i)]);
            const double* v = emb.vector_of(id);
            for (int j = 0; j < d; ++j) m[static_cast<std::size_t>(j)] += v[j];
        }
        for (int j = 0; j < d; ++j) m[static_cast<std::size_t>(j)] /= n;
        return m;
    };

    const auto trig = mean_embedding(inst.trigger.start, inst.trigger.end);
    const auto ctx = mean_embedding(std::max(0, inst.trigger.start - context_window),
                                    std::min(T - 1, inst.trigger.end + context_window));
    const auto ind = indicator_vector(T, inst.trigger, indicator_window);

    Tensor features({T, F});
    for (int t = 0; t < T; ++t) {
        double* row = features.data() + static_cast<std::int64_t>(t) * F;
        const int id = vocab.lookup(inst.sentence->tokens[static_cast<std::size_t>(t)]);
        const double* tok = emb.vector_of(id);
        for (int j = 0; j < d; ++j) row[j] = tok[j];
        for (int j = 0; j < d; ++j) row[d + j] = trig[static_cast<std::size_t>(j)];
        for (int j = 0; j < d; ++j) row[2 * d + j] = ctx[static_cast<std::size_t>(j)];
        row[3 * d] = static_cast<double>(ind[static_cast<std::size_t>(t)]);
    }
    return features;
}

// ---------------------------------------------------------------------------
// Initialization

namespace {

// Modified Gram-Schmidt with one reorthogonalization pass; columns of the
// result are orthonormal. rows >= cols required.
void mgs_columns(std::vector<double>& a, std::int64_t rows, std::int64_t cols) {
    auto col = [&](std::int64_t j) { return a.data() + j; };
    auto dot = [&](std::int64_t i, std::int64_t j) {
        double s = 0.0;
        for (std::int64_t r = 0; r < rows; ++r) s += col(i)[r * cols] * col(j)[r * cols];
        return s;
    };
    for (std::int64_t j = 0; j < cols; ++j) {
        for (int pass = 0; pass < 2; ++pass) {
            for (std::int64_t i = 0; i < j; ++i) {
                const double proj = dot(i, j);
                for (std::int64_t r = 0; r < rows; ++r)
                    col(j)[r * cols] -= proj * col(i)[r * cols];
            }
        }
        const double nrm = std::sqrt(dot(j, j));
        if (nrm <= 0.0) throw NumericError("orthogonal_init: rank-deficient draw");
        for (std::int64_t r = 0; r < rows; ++r) col(j)[r * cols] /= nrm;
    }
}

}  // namespace

Tensor orthogonal_init(std::int64_t rows, std::int64_t cols, RngStream& rng) {
    const bool tall = rows >= cols;
    const std::int64_t r = tall ? rows : cols;
    const std::int64_t c = tall ? cols : rows;
    std::vector<double> a(static_cast<std::size_t>(r * c));
    for (auto& v : a) v = rng.next_gaussian();
    mgs_columns(a, r, c);
    Tensor out({rows, cols});
    if (tall) {
        out.vec() = std::move(a);
    } else {
        for (std::int64_t i = 0; i < rows; ++i)
            for (std::int64_t j = 0; j < cols; ++j) out[i * cols + j] = a[static_cast<std::size_t>(j * rows + i)];
    }
    return out;
}

Tensor he_init(std::int64_t fan_in, std::int64_t fan_out, RngStream& rng) {
    const double std = std::sqrt(2.0 / static_cast<double>(fan_in));
    Tensor out({fan_in, fan_out});
    for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = std * rng.next_gaussian();
    return out;
}

void init_lstm_layer(ParamStore& ps, const std::string& prefix, int input_dim, int hidden,
                     RngStream& rng) {
    const int H = hidden;
    Tensor w_x({input_dim, 4 * H});
    Tensor w_h({H, 4 * H});
    for (int gate = 0; gate < 4; ++gate) {
        const Tensor bx = orthogonal_init(input_dim, H, rng);
        for (int i = 0; i < input_dim; ++i)
            for (int j = 0; j < H; ++j) w_x[i * 4 * H + gate * H + j] = bx[i * H + j];
        const Tensor bh = orthogonal_init(H, H, rng);
        for (int i = 0; i < H; ++i)
            for (int j = 0; j < H; ++j) w_h[i * 4 * H + gate * H + j] = bh[i * H + j];
    }
    Tensor b({4 * H});
    for (int j = H; j < 2 * H; ++j) b[j] = 1.0;  // forget gate bias
    ps.create(prefix + "/W_x", std::move(w_x));
    ps.create(prefix + "/W_h", std::move(w_h));
    ps.create(prefix + "/b", std::move(b));
}

void init_encoder_stack(ParamStore& ps, const std::string& prefix, int input_dim, int hidden,
                        int layers, RngStream& rng) {
    for (int l = 1; l <= layers; ++l) {
        const int in = (l == 1) ? input_dim : 2 * hidden;
        for (const char* dir : {"fwd", "bwd"}) {
            init_lstm_layer(ps, prefix + "/l" + std::to_string(l) + "/" + dir, in, hidden, rng);
        }
    }
}

// ---------------------------------------------------------------------------
// LSTM forward

std::pair<NodeId, NodeId> lstm_step(Tape& tape, NodeId x, NodeId h_prev, NodeId c_prev,
                                    const LstmNodeRefs& p, int hidden) {
    const int H = hidden;
    const NodeId gates =
        tape.add(tape.add(tape.vecmat(x, p.w_x), tape.vecmat(h_prev, p.w_h)), p.b);
    const NodeId i = tape.sigmoid(tape.slice1d(gates, 0, H));
    const NodeId f = tape.sigmoid(tape.slice1d(gates, H, H));
    const NodeId g = tape.tanh(tape.slice1d(gates, 2 * H, H));
    const NodeId o = tape.sigmoid(tape.slice1d(gates, 3 * H, H));
    const NodeId c = tape.add(tape.mul(f, c_prev), tape.mul(i, g));
    const NodeId h = tape.mul(o, tape.tanh(c));
    return {h, c};
}

Tensor dropout_mask(const std::vector<std::int64_t>& shape, double keep, RngStream& rng) {
    Tensor m(shape);
    const double inv = 1.0 / keep;
    for (std::int64_t i = 0; i < m.numel(); ++i) {
        m[i] = (rng.next_double() < keep) ? inv : 0.0;
    }
    return m;
}

EncodeResult encode(Tape& tape, const Tensor& features, const std::string& prefix,
                    const ModelDims& dims, const EncodeOptions& opts) {
    if (features.rank() != 2 || features.dim(0) < 1) {
        throw ContractError("encode: features must be [T, F] with T >= 1");
    }
    if (opts.train && opts.rng == nullptr) {
        throw ContractError("encode: train mode requires an RNG stream");
    }
    const int T = static_cast<int>(features.dim(0));
    const int F = static_cast<int>(features.dim(1));
    const int H = dims.hidden;

    const NodeId feat = tape.constant(features);
    std::vector<NodeId> inputs(static_cast<std::size_t>(T));
    for (int t = 0; t < T; ++t) {
        NodeId x = tape.row(feat, t);
        if (opts.train && opts.dropout.input_keep < 1.0) {
            // standard dropout, fresh per position; the indicator bit stays.
            Tensor m = dropout_mask({F}, opts.dropout.input_keep, *opts.rng);
            m[F - 1] = 1.0;
            x = tape.pointwise_mask(x, std::move(m));
        }
        inputs[static_cast<std::size_t>(t)] = x;
    }

    EncodeResult result;
    std::vector<NodeId> layer_in = inputs;
    for (int l = 1; l <= dims.layers; ++l) {
        std::vector<std::vector<NodeId>> dir_out(2, std::vector<NodeId>(static_cast<std::size_t>(T)));
        for (int d = 0; d < 2; ++d) {
            const bool fwd = (d == 0);
            const std::string lp = prefix + "/l" + std::to_string(l) + (fwd ? "/fwd" : "/bwd");
            LstmNodeRefs refs{tape.param(lp + "/W_x"), tape.param(lp + "/W_h"),
                              tape.param(lp + "/b")};
            Tensor rec_mask, out_mask;
            if (opts.train) {
                // variational: one mask per sequence, reused across steps
                rec_mask = dropout_mask({H}, opts.dropout.recurrent_keep, *opts.rng);
                out_mask = dropout_mask({H}, opts.dropout.output_keep, *opts.rng);
            }
            NodeId h = tape.constant(Tensor::zeros({H}));
            NodeId c = tape.constant(Tensor::zeros({H}));
            for (int step = 0; step < T; ++step) {
                const int t = fwd ? step : T - 1 - step;
                NodeId h_in = h;
                if (opts.train && opts.dropout.recurrent_keep < 1.0) {
                    h_in = tape.pointwise_mask(h, rec_mask);
                }
                auto [h2, c2] =
                    lstm_step(tape, layer_in[static_cast<std::size_t>(t)], h_in, c, refs, H);
                h = h2;
                c = c2;
                NodeId up = h;
                if (opts.train && opts.dropout.output_keep < 1.0) {
                    up = tape.pointwise_mask(h, out_mask);
                }
                dir_out[static_cast<std::size_t>(d)][static_cast<std::size_t>(t)] = up;
            }
        }
        std::vector<NodeId> concat(static_cast<std::size_t>(T));
        for (int t = 0; t < T; ++t) {
            concat[static_cast<std::size_t>(t)] =
                tape.concat_lastdim(dir_out[0][static_cast<std::size_t>(t)],
                                    dir_out[1][static_cast<std::size_t>(t)]);
        }
        result.layer_outputs.push_back(concat);
        layer_in = std::move(concat);
    }
    return result;
}

}  // namespace seqlab
