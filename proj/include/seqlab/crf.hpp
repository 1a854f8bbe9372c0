#pragma once

#include <vector>

#include "seqlab/tape.hpp"

namespace seqlab {

struct CrfNodeRefs {
    NodeId transitions = -1;  // [Y, Y], transitions[from, to]
    NodeId start = -1;        // [Y]
    NodeId stop = -1;         // [Y]
};

/// Negative log-likelihood of the gold path: logZ - score(gold). logZ comes
/// from the forward algorithm in log space (max-shifted log-sum-exp), so the
/// whole expression is differentiable through the tape.
NodeId crf_nll(Tape& tape, NodeId emissions, const CrfNodeRefs& crf,
               const std::vector<int>& gold_tags);

struct ViterbiResult {
    std::vector<int> tags;
    double score = 0.0;
};

/// Exact argmax path; score ties at a backpointer resolve to the lowest tag
/// index.
ViterbiResult viterbi(const Tensor& emissions, const Tensor& transitions, const Tensor& start,
                      const Tensor& stop);

}  // namespace seqlab
