#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "mdq/array.hpp"

namespace mdq::ad {

class Tape;

/// Handle to one value recorded on a tape.
struct Node {
    Tape* tape = nullptr;
    std::size_t id = 0;

    const Array& value() const;
    const Shape& shape() const;
};

/// Reverse-mode define-by-run recorder over Arrays.
///
/// A tape lives for one forward/backward pass and is confined to one
/// thread. Leaves reference caller-owned arrays (parameters, batch
/// input) without copying; op nodes own their outputs. Custom ops are
/// added through make(), which is also how the layer library and the
/// quantum dense layer register their gradients.
class Tape {
public:
    /// Receives the tape and the id of the node being differentiated;
    /// reads grad(self) and accumulates into the parents' grads.
    using BackwardFn = std::function<void(Tape&, std::size_t self)>;

    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    /// Non-owning leaf; `external` must outlive the tape.
    Node leaf(const Array* external, bool requires_grad);

    /// Owned constant with no gradient.
    Node constant(Array value);

    /// Op node owning `value`. `backward` runs only when some parent
    /// leads to a requires_grad leaf.
    Node make(Array value, std::vector<std::size_t> parents, BackwardFn backward);

    const Array& value(std::size_t id) const;
    bool requires_grad(std::size_t id) const;

    /// Gradient buffer of a node, allocated zeroed on first use.
    Array& grad(std::size_t id);
    const Array& grad_of(Node node) const;

    /// Seeds d(loss)/d(loss) = 1 and runs all reachable backward fns in
    /// reverse recording order. loss must hold exactly one element.
    void backward(Node loss);

    std::size_t node_count() const { return entries_.size(); }

    // Elementwise and structural ops; shapes must match exactly where
    // two operands are involved. split/concat act on the last axis.
    Node add(Node a, Node b);
    Node sub(Node a, Node b);
    Node mul(Node a, Node b);
    Node scale(Node a, double factor);
    Node matmul(Node a, Node b);
    Node reshape(Node a, Shape shape);
    Node slice(Node a, std::size_t begin, std::size_t len);
    std::vector<Node> split(Node a, std::size_t parts);
    Node concat(const std::vector<Node>& parts);
    Node reduce_mean(Node a);
    Node map(Node a, std::function<double(double)> f, std::function<double(double)> dfdx);

private:
    struct Entry {
        const Array* external = nullptr;  // set for leaves only
        Array owned;
        Array grad;
        bool requires_grad = false;
        bool grad_ready = false;
        std::vector<std::size_t> parents;
        BackwardFn backward;

        const Array& val() const { return external != nullptr ? *external : owned; }
    };

    Node push(Entry entry);

    std::vector<Entry> entries_;
};

} // namespace mdq::ad
