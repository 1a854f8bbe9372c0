#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "seqlab/tape.hpp"

namespace seqlab {

struct GradCheckReport {
    double max_relative_error = 0.0;
    std::string worst_parameter;
    double epsilon = 0.0;
    std::int64_t entries_checked = 0;
};

/// Builds a scalar loss on the given tape; called many times with perturbed
/// parameter values during finite differencing.
using LossFn = std::function<NodeId(Tape&)>;

/// Central finite differences vs backward() for every entry of every
/// parameter in `params`. Parameters larger than `sample_threshold` entries
/// are probed on a deterministic sample of that size instead of exhaustively.
GradCheckReport grad_check(const LossFn& loss_fn, ParamStore& params, double epsilon,
                           std::int64_t sample_threshold = 4096);

}  // namespace seqlab
