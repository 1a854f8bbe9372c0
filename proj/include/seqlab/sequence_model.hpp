#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "seqlab/corpus.hpp"
#include "seqlab/rng.hpp"
#include "seqlab/tape.hpp"

namespace seqlab {

struct ModelDims {
    int emb_dim = 100;
    int hidden = 100;
    int layers = 3;  // per direction; 3 forward + 3 backward
    int context_window = 2;
    int indicator_window = 2;

    int feature_dim() const { return 3 * emb_dim + 1; }
    void validate() const;
};

/// Keep probabilities (inverted dropout). Variational masks are sampled once
/// per sequence and reused across time steps; at inference all masks are
/// identity.
struct DropoutSpec {
    double input_keep = 0.7;
    double recurrent_keep = 0.85;
    double output_keep = 0.85;
    double classifier_keep = 0.85;

    void validate() const;
};

// ---------------------------------------------------------------------------
// Input features: token embedding, trigger embedding (mean over trigger
// tokens), context embedding (mean over trigger plus context_window tokens
// each side, clamped), and an indicator bit for tokens within
// indicator_window of the trigger. Embeddings are frozen, so the result is
// a constant [T, 3*dim+1] tensor.

Tensor assemble_features(const RoleInstance& inst, const Vocabulary& vocab,
                         const EmbeddingMatrix& emb, int context_window = 2,
                         int indicator_window = 2);

std::vector<int> indicator_vector(int length, Span trigger, int indicator_window);

// ---------------------------------------------------------------------------
// Initialization

/// Semi-orthogonal matrix from QR of a seeded Gaussian, sign-corrected so the
/// result is unique. Columns are orthonormal when rows >= cols, rows
/// otherwise.
Tensor orthogonal_init(std::int64_t rows, std::int64_t cols, RngStream& rng);
Tensor he_init(std::int64_t fan_in, std::int64_t fan_out, RngStream& rng);

/// W_x [input_dim, 4H] and W_h [H, 4H] with gate order (i, f, g, o), each
/// H-column gate block orthogonal; bias zero except the forget slice = 1.
void init_lstm_layer(ParamStore& ps, const std::string& prefix, int input_dim, int hidden,
                     RngStream& rng);
/// layers x {fwd,bwd}; layer 1 consumes feature vectors, deeper layers the
/// 2H-wide concatenation of the previous layer's directions.
void init_encoder_stack(ParamStore& ps, const std::string& prefix, int input_dim, int hidden,
                        int layers, RngStream& rng);

// ---------------------------------------------------------------------------
// LSTM / encoder forward

struct LstmNodeRefs {
    NodeId w_x = -1;
    NodeId w_h = -1;
    NodeId b = -1;
};

/// One step: i,f,o sigmoid gates, g tanh; c = f*c_prev + i*g; h = o*tanh(c).
std::pair<NodeId, NodeId> lstm_step(Tape& tape, NodeId x, NodeId h_prev, NodeId c_prev,
                                    const LstmNodeRefs& p, int hidden);

struct EncodeOptions {
    bool train = false;
    DropoutSpec dropout;
    RngStream* rng = nullptr;  // required when train
};

struct EncodeResult {
    /// layer_outputs[l][t] is the [2H] concatenation of forward and backward
    /// states at layer l+1; retained so hierarchical heads can tap any layer.
    std::vector<std::vector<NodeId>> layer_outputs;

    const std::vector<NodeId>& top() const { return layer_outputs.back(); }
    const std::vector<NodeId>& layer(int l) const {  // 1-based, bottom-up
        return layer_outputs[static_cast<std::size_t>(l - 1)];
    }
};

/// Runs the bidirectional stack under `prefix` over the feature rows.
EncodeResult encode(Tape& tape, const Tensor& features, const std::string& prefix,
                    const ModelDims& dims, const EncodeOptions& opts);

/// Inverted-dropout mask: entries are 0 with probability 1-keep, else 1/keep.
Tensor dropout_mask(const std::vector<std::int64_t>& shape, double keep, RngStream& rng);

}  // namespace seqlab
