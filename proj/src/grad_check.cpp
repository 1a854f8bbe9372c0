#include "seqlab/grad_check.hpp"

#include <cmath>

#include "seqlab/errors.hpp"
#include "seqlab/rng.hpp"

namespace seqlab {

namespace {

double eval_loss(const LossFn& fn, ParamStore& params) {
    Tape tape(&params);
    const NodeId loss = fn(tape);
    return tape.scalar_value(loss);
}

}  // namespace

GradCheckReport grad_check(const LossFn& loss_fn, ParamStore& params, double epsilon,
                           std::int64_t sample_threshold) {
    if (!(epsilon > 0.0) || epsilon > 1e-3) {
        throw ContractError("grad_check: epsilon must be in (0, 1e-3]");
    }

    Tape tape(&params);
    const NodeId loss = loss_fn(tape);
    tape.backward(loss);
    const GradMap analytic = tape.param_grads();

    GradCheckReport report;
    report.epsilon = epsilon;

    for (const auto& [name, grad] : analytic) {
        Tensor& theta = params.get(name);
        std::vector<std::int64_t> entries;
        if (theta.numel() <= sample_threshold) {
            entries.resize(static_cast<std::size_t>(theta.numel()));
            for (std::int64_t i = 0; i < theta.numel(); ++i)
                entries[static_cast<std::size_t>(i)] = i;
        } else {
            RngStream rng(0x9dc5u, "gradcheck/" + name);
            for (std::int64_t i = 0; i < sample_threshold; ++i)
                entries.push_back(static_cast<std::int64_t>(
                    rng.next_below(static_cast<std::uint64_t>(theta.numel()))));
        }
        for (const std::int64_t i : entries) {
            const double saved = theta[i];
            theta[i] = saved + epsilon;
            const double lp = eval_loss(loss_fn, params);
            theta[i] = saved - epsilon;
            const double lm = eval_loss(loss_fn, params);
            theta[i] = saved;
            if (!std::isfinite(lp) || !std::isfinite(lm)) {
                throw NumericError("grad_check: NaN/Inf while probing parameter " + name);
            }
            const double fd = (lp - lm) / (2.0 * epsilon);
            const double ad = grad[i];
            if (!std::isfinite(ad)) {
                throw NumericError("grad_check: non-finite gradient in parameter " + name);
            }
            const double denom = std::max({1.0, std::fabs(fd), std::fabs(ad)});
            const double rel = std::fabs(fd - ad) / denom;
            ++report.entries_checked;
            if (rel > report.max_relative_error) {
                report.max_relative_error = rel;
                report.worst_parameter = name;
            }
        }
    }
    return report;
}

}  // namespace seqlab
