#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "propaxis/num/matrix.hpp"

namespace propaxis::num {

/// Dynamic tape for reverse-mode differentiation over matrices.
///
/// Nodes are recorded in construction order, so parents always precede
/// children; backward() walks the tape once in reverse and accumulates into
/// parent gradients. A tape is built for one loss evaluation and then
/// discarded; values are immutable once recorded.
///
/// Reductions inside ops (matmul, sum, bce_mean) use the deterministic
/// row-ordered scheme documented in kernels.hpp, so a whole forward/backward
/// pass is bit-stable run-to-run.
class Tape {
public:
    struct Var {
        std::size_t id = static_cast<std::size_t>(-1);
    };

    Var leaf(Matrix value);

    Var matmul(Var a, Var b);
    Var add(Var a, Var b);
    Var sub(Var a, Var b);
    Var hadamard(Var a, Var b);
    Var scale(Var a, double c);
    Var add_const(Var a, double c);
    Var relu(Var a);
    Var exp(Var a);
    Var clamp(Var a, double lo, double hi);
    Var transpose(Var a);
    /// Broadcast-add a 1xC row vector to every row of an RxC matrix.
    Var add_rowvec(Var a, Var row);
    /// Sum of all entries, as a 1x1 matrix.
    Var sum(Var a);
    /// Mean of all entries, as a 1x1 matrix.
    Var mean_all(Var a);
    /// Mean over all entries of stable_bce(logits, targets, weights); 1x1.
    /// targets and weights are constants of the same shape as logits.
    Var bce_mean(Var logits, Matrix targets, Matrix weights);

    /// Seeds d(loss)/d(loss) = 1 (loss must be 1x1) and runs one reverse
    /// sweep. Call at most once per tape.
    void backward(Var loss);

    const Matrix& value(Var v) const { return nodes_[v.id].value; }
    /// Accumulated gradient; zeros if the reverse sweep never reached v.
    const Matrix& grad(Var v);

    std::size_t size() const { return nodes_.size(); }

private:
    struct Node {
        Matrix value;
        Matrix grad; // empty until touched
        std::function<void(Tape&, const Matrix&)> backprop;
    };

    Var push(Matrix value, std::function<void(Tape&, const Matrix&)> backprop);
    void accumulate(std::size_t id, const Matrix& delta);
    Matrix& ensure_grad(std::size_t id);

    std::vector<Node> nodes_;
    bool swept_ = false;
};

} // namespace propaxis::num
