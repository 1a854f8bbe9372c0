#include "seqlab/tape.hpp"

#include <algorithm>
#include <cmath>

#include "seqlab/errors.hpp"

namespace seqlab {

// ---------------------------------------------------------------------------
// ParamStore

Tensor& ParamStore::create(const std::string& name, Tensor init) {
    if (values_.count(name)) throw ContractError("parameter already exists: " + name);
    return values_.emplace(name, std::move(init)).first->second;
}

Tensor& ParamStore::get(const std::string& name) {
    auto it = values_.find(name);
    if (it == values_.end()) throw ContractError("unknown parameter: " + name);
    return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw ContractError("unknown parameter: " + name);
    return it->second;
}

std::int64_t ParamStore::total_size() const {
    std::int64_t n = 0;
    for (const auto& [k, v] : values_) n += v.numel();
    return n;
}

std::int64_t ParamStore::size_of_prefix(const std::string& prefix) const {
    std::int64_t n = 0;
    for (const auto& [k, v] : values_) {
        if (k.rfind(prefix, 0) == 0) n += v.numel();
    }
    return n;
}

// ---------------------------------------------------------------------------
// numeric kernels

namespace {

double stable_sigmoid(double x) {
    if (x >= 0.0) {
        return 1.0 / (1.0 + std::exp(-x));
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

// lastdim reduction layout: treat tensor as [outer, inner].
void lastdim_dims(const Tensor& t, std::int64_t& outer, std::int64_t& inner) {
    if (t.rank() == 1) {
        outer = 1;
        inner = t.dim(0);
    } else if (t.rank() == 2) {
        outer = t.dim(0);
        inner = t.dim(1);
    } else {
        throw ShapeError("lastdim op expects rank 1 or 2, got " + t.shape_str());
    }
}

enum class BroadcastKind { Same, RowVec, Scalar };

BroadcastKind broadcast_kind(const Tensor& a, const Tensor& b, const char* op) {
    if (a.same_shape(b)) return BroadcastKind::Same;
    if (b.numel() == 1) return BroadcastKind::Scalar;
    if (a.rank() == 2 && b.rank() == 1 && a.dim(1) == b.dim(0)) return BroadcastKind::RowVec;
    throw ShapeError(std::string(op) + ": shapes not broadcast-compatible " + a.shape_str() +
                     " vs " + b.shape_str());
}

}  // namespace

// ---------------------------------------------------------------------------
// construction

NodeId Tape::push(Node n) {
    nodes_.push_back(std::move(n));
    return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId Tape::constant(Tensor v) {
    Node n;
    n.op = Op::Leaf;
    n.value = std::move(v);
    return push(n);
}

NodeId Tape::param(const std::string& name) {
    auto it = param_nodes_.find(name);
    if (it != param_nodes_.end()) return it->second;
    if (!params_) throw ContractError("Tape has no ParamStore; cannot resolve " + name);
    Node n;
    n.op = Op::Leaf;
    n.value = params_->get(name);
    n.param = static_cast<std::int32_t>(param_names_.size());
    param_names_.push_back(name);
    NodeId id = push(std::move(n));
    param_nodes_.emplace(name, id);
    return id;
}

NodeId Tape::matmul(NodeId a, NodeId b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    if (A.rank() != 2 || B.rank() != 2 || A.dim(1) != B.dim(0)) {
        throw ShapeError("matmul: incompatible shapes " + A.shape_str() + " x " + B.shape_str());
    }
    const std::int64_t m = A.dim(0), k = A.dim(1), nn = B.dim(1);
    Tensor out({m, nn});
    for (std::int64_t i = 0; i < m; ++i) {
        for (std::int64_t kk = 0; kk < k; ++kk) {
            const double av = A[i * k + kk];
            if (av == 0.0) continue;
            const double* brow = B.data() + kk * nn;
            double* orow = out.data() + i * nn;
            for (std::int64_t j = 0; j < nn; ++j) orow[j] += av * brow[j];
        }
    }
    Node n;
    n.op = Op::MatMul;
    n.a = a;
    n.b = b;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::vecmat(NodeId x, NodeId w) {
    const Tensor& X = value(x);
    const Tensor& W = value(w);
    if (X.rank() != 1 || W.rank() != 2 || X.dim(0) != W.dim(0)) {
        throw ShapeError("vecmat: incompatible shapes " + X.shape_str() + " x " + W.shape_str());
    }
    const std::int64_t k = W.dim(0), nn = W.dim(1);
    Tensor out({nn});
    for (std::int64_t kk = 0; kk < k; ++kk) {
        const double xv = X[kk];
        if (xv == 0.0) continue;
        const double* wrow = W.data() + kk * nn;
        for (std::int64_t j = 0; j < nn; ++j) out[j] += xv * wrow[j];
    }
    Node n;
    n.op = Op::VecMat;
    n.a = x;
    n.b = w;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::add(NodeId a, NodeId b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    const BroadcastKind kind = broadcast_kind(A, B, "add");
    Tensor out = A;
    switch (kind) {
        case BroadcastKind::Same:
            for (std::int64_t i = 0; i < out.numel(); ++i) out[i] += B[i];
            break;
        case BroadcastKind::Scalar:
            for (std::int64_t i = 0; i < out.numel(); ++i) out[i] += B[0];
            break;
        case BroadcastKind::RowVec: {
            const std::int64_t rows = A.dim(0), cols = A.dim(1);
            for (std::int64_t i = 0; i < rows; ++i)
                for (std::int64_t j = 0; j < cols; ++j) out[i * cols + j] += B[j];
            break;
        }
    }
    Node n;
    n.op = Op::Add;
    n.a = a;
    n.b = b;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::mul(NodeId a, NodeId b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    const BroadcastKind kind = broadcast_kind(A, B, "mul");
    Tensor out = A;
    switch (kind) {
        case BroadcastKind::Same:
            for (std::int64_t i = 0; i < out.numel(); ++i) out[i] *= B[i];
            break;
        case BroadcastKind::Scalar:
            for (std::int64_t i = 0; i < out.numel(); ++i) out[i] *= B[0];
            break;
        case BroadcastKind::RowVec: {
            const std::int64_t rows = A.dim(0), cols = A.dim(1);
            for (std::int64_t i = 0; i < rows; ++i)
                for (std::int64_t j = 0; j < cols; ++j) out[i * cols + j] *= B[j];
            break;
        }
    }
    Node n;
    n.op = Op::Mul;
    n.a = a;
    n.b = b;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::sigmoid(NodeId x) {
    Tensor out = value(x);
    for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = stable_sigmoid(out[i]);
    Node n;
    n.op = Op::Sigmoid;
    n.a = x;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::tanh(NodeId x) {
    Tensor out = value(x);
    for (std::int64_t i = 0; i < out.numel(); ++i) out[i] = std::tanh(out[i]);
    Node n;
    n.op = Op::Tanh;
    n.a = x;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::softmax_lastdim(NodeId x) {
    const Tensor& X = value(x);
    std::int64_t outer, inner;
    lastdim_dims(X, outer, inner);
    Tensor out = X;
    for (std::int64_t i = 0; i < outer; ++i) {
        double* r = out.data() + i * inner;
        double mx = r[0];
        for (std::int64_t j = 1; j < inner; ++j) mx = std::max(mx, r[j]);
        double s = 0.0;
        for (std::int64_t j = 0; j < inner; ++j) {
            r[j] = std::exp(r[j] - mx);
            s += r[j];
        }
        for (std::int64_t j = 0; j < inner; ++j) r[j] /= s;
    }
    Node n;
    n.op = Op::SoftmaxLast;
    n.a = x;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::log_sum_exp_lastdim(NodeId x) {
    const Tensor& X = value(x);
    std::int64_t outer, inner;
    lastdim_dims(X, outer, inner);
    Tensor out({outer});
    for (std::int64_t i = 0; i < outer; ++i) {
        const double* r = X.data() + i * inner;
        double mx = r[0];
        for (std::int64_t j = 1; j < inner; ++j) mx = std::max(mx, r[j]);
        double s = 0.0;
        for (std::int64_t j = 0; j < inner; ++j) s += std::exp(r[j] - mx);
        out[i] = mx + std::log(s);
    }
    Node n;
    n.op = Op::LogSumExpLast;
    n.a = x;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::concat_lastdim(NodeId a, NodeId b) {
    const Tensor& A = value(a);
    const Tensor& B = value(b);
    Tensor out;
    if (A.rank() == 1 && B.rank() == 1) {
        out = Tensor({A.dim(0) + B.dim(0)});
        std::copy(A.data(), A.data() + A.numel(), out.data());
        std::copy(B.data(), B.data() + B.numel(), out.data() + A.numel());
    } else if (A.rank() == 2 && B.rank() == 2 && A.dim(0) == B.dim(0)) {
        const std::int64_t rows = A.dim(0), ca = A.dim(1), cb = B.dim(1);
        out = Tensor({rows, ca + cb});
        for (std::int64_t i = 0; i < rows; ++i) {
            std::copy(A.data() + i * ca, A.data() + (i + 1) * ca, out.data() + i * (ca + cb));
            std::copy(B.data() + i * cb, B.data() + (i + 1) * cb,
                      out.data() + i * (ca + cb) + ca);
        }
    } else {
        throw ShapeError("concat_lastdim: incompatible shapes " + A.shape_str() + " vs " +
                         B.shape_str());
    }
    Node n;
    n.op = Op::ConcatLast;
    n.a = a;
    n.b = b;
    n.value = std::move(out);
    return push(std::move(n));
}

NodeId Tape::pointwise_mask(NodeId x, Tensor mask) {
    const Tensor& X = value(x);
    require_same_shape(X, mask, "pointwise_mask");
    Tensor out = X;
    for (std::int64_t i = 0; i < out.numel(); ++i) out[i] *= mask[i];
    Node n;
    n.op = Op::Mask;
    n.a = x;
    n.value = std::move(out);
    n.aux = std::move(mask);
    return push(std::move(n));
}

NodeId Tape::gradient_reversal(NodeId x, double scale) {
    if (!(scale > 0.0)) throw ContractError("gradient_reversal: scale must be > 0");
    Node n;
    n.op = Op::GradReverse;
    n.a = x;
    n.value = value(x);  // bit-identical forward
    n.scalar = scale;
    return push(std::move(n));
}

NodeId Tape::row(NodeId x, std::int64_t r) {
    const Tensor& X = value(x);
    if (X.rank() != 2 || r < 0 || r >= X.dim(0)) {
        throw ShapeError("row: index " + std::to_string(r) + " out of " + X.shape_str());
    }
    const std::int64_t c = X.dim(1);
    Tensor out({c});
    std::copy(X.data() + r * c, X.data() + (r + 1) * c, out.data());
    Node n;
    n.op = Op::Row;
    n.a = x;
    n.value = std::move(out);
    n.i0 = static_cast<std::int32_t>(r);
    return push(std::move(n));
}

NodeId Tape::slice1d(NodeId x, std::int64_t offset, std::int64_t len) {
    const Tensor& X = value(x);
    if (X.rank() != 1 || offset < 0 || len < 0 || offset + len > X.dim(0)) {
        throw ShapeError("slice1d: [" + std::to_string(offset) + "," +
                         std::to_string(offset + len) + ") out of " + X.shape_str());
    }
    Tensor out({len});
    std::copy(X.data() + offset, X.data() + offset + len, out.data());
    Node n;
    n.op = Op::Slice1d;
    n.a = x;
    n.value = std::move(out);
    n.i0 = static_cast<std::int32_t>(offset);
    n.i1 = static_cast<std::int32_t>(len);
    return push(std::move(n));
}

NodeId Tape::gather(NodeId x, std::vector<std::int64_t> flat_indices) {
    const Tensor& X = value(x);
    Tensor out({static_cast<std::int64_t>(flat_indices.size())});
    for (std::size_t i = 0; i < flat_indices.size(); ++i) {
        const std::int64_t fi = flat_indices[i];
        if (fi < 0 || fi >= X.numel()) {
            throw ShapeError("gather: flat index " + std::to_string(fi) + " out of " +
                             X.shape_str());
        }
        out[static_cast<std::int64_t>(i)] = X[fi];
    }
    Node n;
    n.op = Op::Gather;
    n.a = x;
    n.value = std::move(out);
    n.idx = std::move(flat_indices);
    return push(std::move(n));
}

NodeId Tape::stack_rows(const std::vector<NodeId>& rows) {
    if (rows.empty()) throw ContractError("stack_rows: empty input");
    const std::int64_t c = value(rows[0]).dim(0);
    Tensor out({static_cast<std::int64_t>(rows.size()), c});
    for (std::size_t t = 0; t < rows.size(); ++t) {
        const Tensor& r = value(rows[t]);
        if (r.rank() != 1 || r.dim(0) != c) {
            throw ShapeError("stack_rows: row " + std::to_string(t) + " has shape " +
                             r.shape_str());
        }
        std::copy(r.data(), r.data() + c, out.data() + static_cast<std::int64_t>(t) * c);
    }
    Node n;
    n.op = Op::StackRows;
    n.value = std::move(out);
    n.many = rows;
    return push(std::move(n));
}

NodeId Tape::sum(NodeId x) {
    const Tensor& X = value(x);
    double s = 0.0;
    for (std::int64_t i = 0; i < X.numel(); ++i) s += X[i];
    Node n;
    n.op = Op::Sum;
    n.a = x;
    n.value = Tensor::scalar(s);
    return push(std::move(n));
}

NodeId Tape::scale(NodeId x, double s) {
    Tensor out = value(x);
    for (std::int64_t i = 0; i < out.numel(); ++i) out[i] *= s;
    Node n;
    n.op = Op::Scale;
    n.a = x;
    n.value = std::move(out);
    n.scalar = s;
    return push(std::move(n));
}

NodeId Tape::transpose(NodeId x) {
    const Tensor& X = value(x);
    if (X.rank() != 2) throw ShapeError("transpose: expects rank 2, got " + X.shape_str());
    const std::int64_t r = X.dim(0), c = X.dim(1);
    Tensor out({c, r});
    for (std::int64_t i = 0; i < r; ++i)
        for (std::int64_t j = 0; j < c; ++j) out[j * r + i] = X[i * c + j];
    Node n;
    n.op = Op::Transpose;
    n.a = x;
    n.value = std::move(out);
    return push(std::move(n));
}

// ---------------------------------------------------------------------------
// backward

Tensor& Tape::grad_buf(NodeId id) {
    Node& n = at(id);
    if (n.grad.numel() == 0) n.grad = Tensor::zeros(n.value.shape());
    return n.grad;
}

const Tensor& Tape::grad(NodeId id) const {
    const Node& n = at(id);
    if (n.grad.numel() != 0) return n.grad;
    zero_like_ = Tensor::zeros(n.value.shape());
    return zero_like_;
}

double Tape::scalar_value(NodeId id) const {
    const Tensor& v = value(id);
    if (v.numel() != 1) throw ContractError("scalar_value: node has shape " + v.shape_str());
    return v[0];
}

void Tape::backward(NodeId loss) {
    if (value(loss).numel() != 1) {
        throw ContractError("backward: loss must be scalar, got shape " +
                            value(loss).shape_str());
    }
    // Reachability pass: only nodes feeding the loss get gradient buffers.
    std::vector<bool> reach(nodes_.size(), false);
    std::vector<NodeId> stack{loss};
    reach[static_cast<std::size_t>(loss)] = true;
    while (!stack.empty()) {
        const NodeId id = stack.back();
        stack.pop_back();
        const Node& n = at(id);
        auto visit = [&](NodeId c) {
            if (c >= 0 && !reach[static_cast<std::size_t>(c)]) {
                reach[static_cast<std::size_t>(c)] = true;
                stack.push_back(c);
            }
        };
        visit(n.a);
        visit(n.b);
        for (NodeId c : n.many) visit(c);
    }

    grad_buf(loss)[0] = 1.0;
    for (NodeId id = loss; id >= 0; --id) {
        if (!reach[static_cast<std::size_t>(id)]) continue;
        Node& n = at(id);
        if (n.grad.numel() == 0) continue;  // reachable but never received gradient
        backward_step(n);
    }
    ran_backward_ = true;
}

void Tape::backward_step(Node& n) {
    const Tensor& g = n.grad;
    switch (n.op) {
        case Op::Leaf:
            break;
        case Op::MatMul: {
            const Tensor& A = value(n.a);
            const Tensor& B = value(n.b);
            Tensor& ga = grad_buf(n.a);
            Tensor& gb = grad_buf(n.b);
            const std::int64_t m = A.dim(0), k = A.dim(1), nn = B.dim(1);
            for (std::int64_t i = 0; i < m; ++i) {
                const double* grow = g.data() + i * nn;
                for (std::int64_t kk = 0; kk < k; ++kk) {
                    const double* brow = B.data() + kk * nn;
                    double acc = 0.0;
                    for (std::int64_t j = 0; j < nn; ++j) acc += grow[j] * brow[j];
                    ga[i * k + kk] += acc;
                    const double av = A[i * k + kk];
                    if (av != 0.0) {
                        double* gbrow = gb.data() + kk * nn;
                        for (std::int64_t j = 0; j < nn; ++j) gbrow[j] += av * grow[j];
                    }
                }
            }
            break;
        }
        case Op::VecMat: {
            const Tensor& X = value(n.a);
            const Tensor& W = value(n.b);
            Tensor& gx = grad_buf(n.a);
            Tensor& gw = grad_buf(n.b);
            const std::int64_t k = W.dim(0), nn = W.dim(1);
            for (std::int64_t kk = 0; kk < k; ++kk) {
                const double* wrow = W.data() + kk * nn;
                double acc = 0.0;
                for (std::int64_t j = 0; j < nn; ++j) acc += g[j] * wrow[j];
                gx[kk] += acc;
                const double xv = X[kk];
                if (xv != 0.0) {
                    double* gwrow = gw.data() + kk * nn;
                    for (std::int64_t j = 0; j < nn; ++j) gwrow[j] += xv * g[j];
                }
            }
            break;
        }
        case Op::Add: {
            const Tensor& A = value(n.a);
            const Tensor& B = value(n.b);
            Tensor& ga = grad_buf(n.a);
            Tensor& gb = grad_buf(n.b);
            for (std::int64_t i = 0; i < g.numel(); ++i) ga[i] += g[i];
            if (A.same_shape(B)) {
                for (std::int64_t i = 0; i < g.numel(); ++i) gb[i] += g[i];
            } else if (B.numel() == 1) {
                for (std::int64_t i = 0; i < g.numel(); ++i) gb[0] += g[i];
            } else {
                const std::int64_t rows = A.dim(0), cols = A.dim(1);
                for (std::int64_t i = 0; i < rows; ++i)
                    for (std::int64_t j = 0; j < cols; ++j) gb[j] += g[i * cols + j];
            }
            break;
        }
        case Op::Mul: {
            const Tensor& A = value(n.a);
            const Tensor& B = value(n.b);
            Tensor& ga = grad_buf(n.a);
            Tensor& gb = grad_buf(n.b);
            if (A.same_shape(B)) {
                for (std::int64_t i = 0; i < g.numel(); ++i) {
                    ga[i] += g[i] * B[i];
                    gb[i] += g[i] * A[i];
                }
            } else if (B.numel() == 1) {
                for (std::int64_t i = 0; i < g.numel(); ++i) {
                    ga[i] += g[i] * B[0];
                    gb[0] += g[i] * A[i];
                }
            } else {
                const std::int64_t rows = A.dim(0), cols = A.dim(1);
                for (std::int64_t i = 0; i < rows; ++i) {
                    for (std::int64_t j = 0; j < cols; ++j) {
                        ga[i * cols + j] += g[i * cols + j] * B[j];
                        gb[j] += g[i * cols + j] * A[i * cols + j];
                    }
                }
            }
            break;
        }
        case Op::Sigmoid: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t i = 0; i < g.numel(); ++i) {
                const double y = n.value[i];
                ga[i] += g[i] * y * (1.0 - y);
            }
            break;
        }
        case Op::Tanh: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t i = 0; i < g.numel(); ++i) {
                const double y = n.value[i];
                ga[i] += g[i] * (1.0 - y * y);
            }
            break;
        }
        case Op::SoftmaxLast: {
            Tensor& ga = grad_buf(n.a);
            std::int64_t outer, inner;
            lastdim_dims(n.value, outer, inner);
            for (std::int64_t i = 0; i < outer; ++i) {
                const double* y = n.value.data() + i * inner;
                const double* gr = g.data() + i * inner;
                double dot = 0.0;
                for (std::int64_t j = 0; j < inner; ++j) dot += gr[j] * y[j];
                double* gar = ga.data() + i * inner;
                for (std::int64_t j = 0; j < inner; ++j) gar[j] += y[j] * (gr[j] - dot);
            }
            break;
        }
        case Op::LogSumExpLast: {
            const Tensor& X = value(n.a);
            Tensor& ga = grad_buf(n.a);
            std::int64_t outer, inner;
            lastdim_dims(X, outer, inner);
            for (std::int64_t i = 0; i < outer; ++i) {
                const double* xr = X.data() + i * inner;
                double* gar = ga.data() + i * inner;
                const double lse = n.value[i];
                for (std::int64_t j = 0; j < inner; ++j)
                    gar[j] += g[i] * std::exp(xr[j] - lse);
            }
            break;
        }
        case Op::ConcatLast: {
            const Tensor& A = value(n.a);
            const Tensor& B = value(n.b);
            Tensor& ga = grad_buf(n.a);
            Tensor& gb = grad_buf(n.b);
            if (A.rank() == 1) {
                const std::int64_t na = A.dim(0);
                for (std::int64_t i = 0; i < na; ++i) ga[i] += g[i];
                for (std::int64_t i = 0; i < B.dim(0); ++i) gb[i] += g[na + i];
            } else {
                const std::int64_t rows = A.dim(0), ca = A.dim(1), cb = B.dim(1);
                for (std::int64_t i = 0; i < rows; ++i) {
                    for (std::int64_t j = 0; j < ca; ++j)
                        ga[i * ca + j] += g[i * (ca + cb) + j];
                    for (std::int64_t j = 0; j < cb; ++j)
                        gb[i * cb + j] += g[i * (ca + cb) + ca + j];
                }
            }
            break;
        }
        case Op::Mask: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t i = 0; i < g.numel(); ++i) ga[i] += g[i] * n.aux[i];
            break;
        }
        case Op::GradReverse: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t i = 0; i < g.numel(); ++i) ga[i] += -n.scalar * g[i];
            break;
        }
        case Op::Row: {
            Tensor& ga = grad_buf(n.a);
            const std::int64_t c = value(n.a).dim(1);
            for (std::int64_t j = 0; j < c; ++j) ga[n.i0 * c + j] += g[j];
            break;
        }
        case Op::Slice1d: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t j = 0; j < n.i1; ++j) ga[n.i0 + j] += g[j];
            break;
        }
        case Op::Gather: {
            Tensor& ga = grad_buf(n.a);
            for (std::size_t i = 0; i < n.idx.size(); ++i)
                ga[n.idx[i]] += g[static_cast<std::int64_t>(i)];
            break;
        }
        case Op::StackRows: {
            const std::int64_t c = n.value.dim(1);
            for (std::size_t t = 0; t < n.many.size(); ++t) {
                Tensor& gr = grad_buf(n.many[t]);
                const double* src = g.data() + static_cast<std::int64_t>(t) * c;
                for (std::int64_t j = 0; j < c; ++j) gr[j] += src[j];
            }
            break;
        }
        case Op::Sum: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t i = 0; i < ga.numel(); ++i) ga[i] += g[0];
            break;
        }
        case Op::Scale: {
            Tensor& ga = grad_buf(n.a);
            for (std::int64_t i = 0; i < g.numel(); ++i) ga[i] += n.scalar * g[i];
            break;
        }
        case Op::Transpose: {
            Tensor& ga = grad_buf(n.a);
            const std::int64_t r = value(n.a).dim(0), c = value(n.a).dim(1);
            for (std::int64_t i = 0; i < r; ++i)
                for (std::int64_t j = 0; j < c; ++j) ga[i * c + j] += g[j * r + i];
            break;
        }
    }
}

GradMap Tape::param_grads() const {
    GradMap out;
    for (const auto& [name, id] : param_nodes_) {
        const Node& n = at(id);
        if (n.grad.numel() != 0) {
            out.emplace(name, n.grad);
        } else {
            out.emplace(name, Tensor::zeros(n.value.shape()));
        }
    }
    return out;
}

}  // namespace seqlab
