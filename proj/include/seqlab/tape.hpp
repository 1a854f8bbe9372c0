#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "seqlab/tensor.hpp"

namespace seqlab {

using NodeId = std::int32_t;
using GradMap = std::map<std::string, Tensor>;

/// Named parameter arrays. std::map keeps iteration order deterministic,
/// which global-norm clipping, Adam and serialization all rely on.
class ParamStore {
public:
    Tensor& create(const std::string& name, Tensor init);
    Tensor& get(const std::string& name);
    const Tensor& get(const std::string& name) const;
    bool contains(const std::string& name) const { return values_.count(name) != 0; }

    std::map<std::string, Tensor>& values() { return values_; }
    const std::map<std::string, Tensor>& values() const { return values_; }

    std::int64_t total_size() const;
    /// Total size over names that start with `prefix`.
    std::int64_t size_of_prefix(const std::string& prefix) const;

private:
    std::map<std::string, Tensor> values_;
};

enum class Op : std::uint8_t {
    Leaf,
    MatMul,
    VecMat,
    Add,
    Mul,
    Sigmoid,
    Tanh,
    SoftmaxLast,
    LogSumExpLast,
    ConcatLast,
    Mask,
    GradReverse,
    Row,
    Slice1d,
    Gather,
    StackRows,
    Sum,
    Scale,
    Transpose,
};

struct Node {
    Op op = Op::Leaf;
    NodeId a = -1;
    NodeId b = -1;
    Tensor value;
    Tensor grad;  // allocated during backward, only for reachable nodes
    double scalar = 0.0;
    std::int32_t i0 = 0;
    std::int32_t i1 = 0;
    std::vector<NodeId> many;      // StackRows inputs
    std::vector<std::int64_t> idx; // Gather flat indices
    Tensor aux;                    // Mask multiplier
    std::int32_t param = -1;       // index into the tape's param registry
};

/// Define-by-run reverse-mode tape. A tape is built fresh for every forward
/// pass and is single-threaded; independent tapes may live on separate
/// threads. Values are immutable once a node is created.
class Tape {
public:
    Tape() = default;
    explicit Tape(ParamStore* params) : params_(params) {}

    // ---- graph construction -------------------------------------------
    NodeId constant(Tensor v);
    /// Leaf tracked for gradient collection. Repeated requests for the same
    /// name return the same node, so fan-out accumulates naturally.
    NodeId param(const std::string& name);

    NodeId matmul(NodeId a, NodeId b);
    NodeId vecmat(NodeId x, NodeId w);
    NodeId add(NodeId a, NodeId b);
    NodeId mul(NodeId a, NodeId b);
    NodeId sigmoid(NodeId x);
    NodeId tanh(NodeId x);
    NodeId softmax_lastdim(NodeId x);
    NodeId log_sum_exp_lastdim(NodeId x);
    NodeId concat_lastdim(NodeId a, NodeId b);
    NodeId pointwise_mask(NodeId x, Tensor mask);
    /// Identity forward; backward multiplies the incoming gradient by -scale.
    NodeId gradient_reversal(NodeId x, double scale);
    NodeId row(NodeId x, std::int64_t r);
    NodeId slice1d(NodeId x, std::int64_t offset, std::int64_t len);
    NodeId gather(NodeId x, std::vector<std::int64_t> flat_indices);
    NodeId stack_rows(const std::vector<NodeId>& rows);
    NodeId sum(NodeId x);
    NodeId scale(NodeId x, double s);
    NodeId transpose(NodeId x);
    NodeId sub(NodeId a, NodeId b) { return add(a, scale(b, -1.0)); }

    // ---- execution ------------------------------------------------------
    /// Reverse-topological accumulation from a scalar loss. Gradient buffers
    /// are zeroed at allocation; fan-out accumulates with +=.
    void backward(NodeId loss);

    const Tensor& value(NodeId id) const { return nodes_[static_cast<std::size_t>(id)].value; }
    /// Zero tensor if the node was not reached by backward().
    const Tensor& grad(NodeId id) const;
    double scalar_value(NodeId id) const;

    /// name -> gradient for every parameter requested through param();
    /// parameters off the path to the loss report zero gradients.
    GradMap param_grads() const;

    std::size_t size() const { return nodes_.size(); }

private:
    NodeId push(Node n);
    const Node& at(NodeId id) const { return nodes_[static_cast<std::size_t>(id)]; }
    Node& at(NodeId id) { return nodes_[static_cast<std::size_t>(id)]; }
    void backward_step(Node& n);
    Tensor& grad_buf(NodeId id);

    ParamStore* params_ = nullptr;
    std::vector<Node> nodes_;
    std::map<std::string, NodeId> param_nodes_;
    std::vector<std::string> param_names_;
    mutable Tensor zero_like_;  // scratch for grad() on unreached nodes
    bool ran_backward_ = false;
};

}  // namespace seqlab
