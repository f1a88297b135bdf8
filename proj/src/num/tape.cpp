#include "propaxis/num/tape.hpp"

#include <cmath>
#include <utility>

#include "propaxis/num/kernels.hpp"

namespace propaxis::num {

Tape::Var Tape::push(Matrix value, std::function<void(Tape&, const Matrix&)> backprop) {
    nodes_.push_back(Node{std::move(value), Matrix{}, std::move(backprop)});
    return Var{nodes_.size() - 1};
}

Matrix& Tape::ensure_grad(std::size_t id) {
    Node& n = nodes_[id];
    if (n.grad.data.empty()) n.grad = Matrix(n.value.rows, n.value.cols);
    return n.grad;
}

void Tape::accumulate(std::size_t id, const Matrix& delta) {
    Matrix& g = ensure_grad(id);
    require_same_shape(g, delta, "tape accumulate");
    for (std::size_t i = 0; i < g.data.size(); ++i) g.data[i] += delta.data[i];
}

const Matrix& Tape::grad(Var v) { return ensure_grad(v.id); }

Tape::Var Tape::leaf(Matrix value) { return push(std::move(value), nullptr); }

Tape::Var Tape::matmul(Var a, Var b) {
    Matrix out = kernels::matmul(nodes_[a.id].value, nodes_[b.id].value);
    return push(std::move(out), [a, b](Tape& t, const Matrix& up) {
        const Matrix& av = t.nodes_[a.id].value;
        const Matrix& bv = t.nodes_[b.id].value;
        t.accumulate(a.id, kernels::matmul(up, kernels::transpose(bv)));
        t.accumulate(b.id, kernels::matmul(kernels::transpose(av), up));
    });
}

Tape::Var Tape::add(Var a, Var b) {
    const Matrix& av = nodes_[a.id].value;
    const Matrix& bv = nodes_[b.id].value;
    require_same_shape(av, bv, "add");
    Matrix out = av;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += bv.data[i];
    return push(std::move(out), [a, b](Tape& t, const Matrix& up) {
        t.accumulate(a.id, up);
        t.accumulate(b.id, up);
    });
}

Tape::Var Tape::sub(Var a, Var b) {
    const Matrix& av = nodes_[a.id].value;
    const Matrix& bv = nodes_[b.id].value;
    require_same_shape(av, bv, "sub");
    Matrix out = av;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= bv.data[i];
    return push(std::move(out), [a, b](Tape& t, const Matrix& up) {
        t.accumulate(a.id, up);
        Matrix neg = up;
        for (double& v : neg.data) v = -v;
        t.accumulate(b.id, neg);
    });
}

Tape::Var Tape::hadamard(Var a, Var b) {
    const Matrix& av = nodes_[a.id].value;
    const Matrix& bv = nodes_[b.id].value;
    require_same_shape(av, bv, "hadamard");
    Matrix out = av;
    for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] *= bv.data[i];
    return push(std::move(out), [a, b](Tape& t, const Matrix& up) {
        const Matrix& av2 = t.nodes_[a.id].value;
        const Matrix& bv2 = t.nodes_[b.id].value;
        Matrix da = up, db = up;
        for (std::size_t i = 0; i < up.data.size(); ++i) {
            da.data[i] *= bv2.data[i];
            db.data[i] *= av2.data[i];
        }
        t.accumulate(a.id, da);
        t.accumulate(b.id, db);
    });
}

Tape::Var Tape::scale(Var a, double c) {
    Matrix out = nodes_[a.id].value;
    for (double& v : out.data) v *= c;
    return push(std::move(out), [a, c](Tape& t, const Matrix& up) {
        Matrix da = up;
        for (double& v : da.data) v *= c;
        t.accumulate(a.id, da);
    });
}

Tape::Var Tape::add_const(Var a, double c) {
    Matrix out = nodes_[a.id].value;
    for (double& v : out.data) v += c;
    return push(std::move(out),
                [a](Tape& t, const Matrix& up) { t.accumulate(a.id, up); });
}

Tape::Var Tape::relu(Var a) {
    Matrix out = nodes_[a.id].value;
    for (double& v : out.data) v = v > 0.0 ? v : 0.0;
    return push(std::move(out), [a](Tape& t, const Matrix& up) {
        const Matrix& av = t.nodes_[a.id].value;
        Matrix da = up;
        // Exact ReLU derivative: zero in the clipped region (input <= 0).
        for (std::size_t i = 0; i < da.data.size(); ++i)
            if (!(av.data[i] > 0.0)) da.data[i] = 0.0;
        t.accumulate(a.id, da);
    });
}

Tape::Var Tape::exp(Var a) {
    Matrix out = nodes_[a.id].value;
    for (double& v : out.data) v = std::exp(v);
    Var result = push(std::move(out), [a](Tape& t, const Matrix& up) {
        // d exp = exp(x), which is this node's own value; recompute from input
        // to avoid capturing the result id before it exists.
        const Matrix& av = t.nodes_[a.id].value;
        Matrix da = up;
        for (std::size_t i = 0; i < da.data.size(); ++i) da.data[i] *= std::exp(av.data[i]);
        t.accumulate(a.id, da);
    });
    return result;
}

Tape::Var Tape::clamp(Var a, double lo, double hi) {
    Matrix out = nodes_[a.id].value;
    for (double& v : out.data) v = v < lo ? lo : (v > hi ? hi : v);
    return push(std::move(out), [a, lo, hi](Tape& t, const Matrix& up) {
        const Matrix& av = t.nodes_[a.id].value;
        Matrix da = up;
        for (std::size_t i = 0; i < da.data.size(); ++i)
            if (!(av.data[i] > lo && av.data[i] < hi)) da.data[i] = 0.0;
        t.accumulate(a.id, da);
    });
}

Tape::Var Tape::transpose(Var a) {
    return push(kernels::transpose(nodes_[a.id].value), [a](Tape& t, const Matrix& up) {
        t.accumulate(a.id, kernels::transpose(up));
    });
}

Tape::Var Tape::add_rowvec(Var a, Var row) {
    const Matrix& av = nodes_[a.id].value;
    const Matrix& rv = nodes_[row.id].value;
    if (rv.rows != 1 || rv.cols != av.cols)
        raise(ErrorKind::Shape, "add_rowvec: row must be 1x" + std::to_string(av.cols) +
                                    ", got " + rv.shape_str());
    Matrix out = av;
    for (std::size_t i = 0; i < av.rows; ++i)
        for (std::size_t j = 0; j < av.cols; ++j) out.at(i, j) += rv.at(0, j);
    return push(std::move(out), [a, row](Tape& t, const Matrix& up) {
        t.accumulate(a.id, up);
        Matrix dr(1, up.cols);
        for (std::size_t i = 0; i < up.rows; ++i)
            for (std::size_t j = 0; j < up.cols; ++j) dr.at(0, j) += up.at(i, j);
        t.accumulate(row.id, dr);
    });
}

Tape::Var Tape::sum(Var a) {
    Matrix out(1, 1);
    out.at(0, 0) = kernels::sum_all(nodes_[a.id].value);
    return push(std::move(out), [a](Tape& t, const Matrix& up) {
        const Matrix& av = t.nodes_[a.id].value;
        Matrix da(av.rows, av.cols, up.at(0, 0));
        t.accumulate(a.id, da);
    });
}

Tape::Var Tape::mean_all(Var a) {
    const double n = static_cast<double>(nodes_[a.id].value.size());
    Matrix out(1, 1);
    out.at(0, 0) = kernels::sum_all(nodes_[a.id].value) / n;
    return push(std::move(out), [a, n](Tape& t, const Matrix& up) {
        const Matrix& av = t.nodes_[a.id].value;
        Matrix da(av.rows, av.cols, up.at(0, 0) / n);
        t.accumulate(a.id, da);
    });
}

Tape::Var Tape::bce_mean(Var logits, Matrix targets, Matrix weights) {
    Matrix out(1, 1);
    out.at(0, 0) = kernels::bce_mean(nodes_[logits.id].value, targets, weights);
    return push(std::move(out), [logits, targets = std::move(targets),
                                 weights = std::move(weights)](Tape& t, const Matrix& up) {
        Matrix dl(targets.rows, targets.cols);
        kernels::bce_mean_backward(t.nodes_[logits.id].value, targets, weights, up.at(0, 0), dl);
        t.accumulate(logits.id, dl);
    });
}

void Tape::backward(Var loss) {
    if (swept_) raise(ErrorKind::Domain, "tape backward called twice");
    swept_ = true;
    const Matrix& lv = nodes_[loss.id].value;
    if (lv.rows != 1 || lv.cols != 1)
        raise(ErrorKind::Shape, "backward: loss must be 1x1, got " + lv.shape_str());
    ensure_grad(loss.id).at(0, 0) = 1.0;
    for (std::size_t i = loss.id + 1; i-- > 0;) {
        Node& n = nodes_[i];
        if (n.grad.data.empty() || !n.backprop) continue;
        n.backprop(*this, n.grad);
    }
}

} // namespace propaxis::num
