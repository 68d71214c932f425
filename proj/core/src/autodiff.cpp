#include "mdq/autodiff.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace mdq::ad {

const Array& Node::value() const {
    return tape->value(id);
}

const Shape& Node::shape() const {
    return tape->value(id).shape();
}

Node Tape::push(Entry entry) {
#ifndef NDEBUG
    entry.val().check_finite("tape node");
#endif
    entries_.push_back(std::move(entry));
    return Node{this, entries_.size() - 1};
}

Node Tape::leaf(const Array* external, bool requires_grad) {
    Entry e;
    e.external = external;
    e.requires_grad = requires_grad;
    return push(std::move(e));
}

Node Tape::constant(Array value) {
    Entry e;
    e.owned = std::move(value);
    return push(std::move(e));
}

Node Tape::make(Array value, std::vector<std::size_t> parents, BackwardFn backward) {
    Entry e;
    e.owned = std::move(value);
    for (std::size_t p : parents) {
        e.requires_grad = e.requires_grad || entries_[p].requires_grad;
    }
    e.parents = std::move(parents);
    e.backward = std::move(backward);
    return push(std::move(e));
}

const Array& Tape::value(std::size_t id) const {
    return entries_[id].val();
}

bool Tape::requires_grad(std::size_t id) const {
    return entries_[id].requires_grad;
}

Array& Tape::grad(std::size_t id) {
    Entry& e = entries_[id];
    if (!e.grad_ready) {
        e.grad = Array(e.val().shape());
        e.grad_ready = true;
    }
    return e.grad;
}

const Array& Tape::grad_of(Node node) const {
    const Entry& e = entries_[node.id];
    if (!e.grad_ready) {
        throw std::logic_error("grad_of: backward() has not reached this node");
    }
    return e.grad;
}

void Tape::backward(Node loss) {
    if (loss.tape != this) {
        throw std::invalid_argument("backward: node belongs to another tape");
    }
    if (value(loss.id).size() != 1) {
        throw std::invalid_argument("backward: loss must hold exactly one element, got shape " +
                                    shape_string(value(loss.id).shape()));
    }
    grad(loss.id)[0] = 1.0;

    std::vector<bool> reached(loss.id + 1, false);
    reached[loss.id] = true;
    for (std::size_t id = loss.id + 1; id-- > 0;) {
        Entry& e = entries_[id];
        if (!reached[id] || !e.requires_grad) {
            continue;
        }
        for (std::size_t p : e.parents) {
            reached[p] = true;
        }
        if (e.backward) {
            e.backward(*this, id);
        }
    }
}

namespace {

void require_same_shape(const Node& a, const Node& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                    shape_string(a.shape()) + " vs " + shape_string(b.shape()));
    }
}

// Rows = product of all leading axes; slice/concat walk the last axis.
std::size_t leading_rows(const Shape& shape) {
    std::size_t rows = 1;
    for (std::size_t i = 0; i + 1 < shape.size(); ++i) {
        rows *= shape[i];
    }
    return rows;
}

} // namespace

Node Tape::add(Node a, Node b) {
    require_same_shape(a, b, "add");
    Array out(a.shape());
    const Array& av = a.value();
    const Array& bv = b.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = av[i] + bv[i];
    }
    const std::size_t aid = a.id, bid = b.id;
    return make(std::move(out), {aid, bid}, [aid, bid](Tape& t, std::size_t self) {
        const Array& g = t.grad(self);
        if (t.requires_grad(aid)) {
            Array& ga = t.grad(aid);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
        }
        if (t.requires_grad(bid)) {
            Array& gb = t.grad(bid);
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i];
        }
    });
}

Node Tape::sub(Node a, Node b) {
    require_same_shape(a, b, "sub");
    Array out(a.shape());
    const Array& av = a.value();
    const Array& bv = b.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = av[i] - bv[i];
    }
    const std::size_t aid = a.id, bid = b.id;
    return make(std::move(out), {aid, bid}, [aid, bid](Tape& t, std::size_t self) {
        const Array& g = t.grad(self);
        if (t.requires_grad(aid)) {
            Array& ga = t.grad(aid);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i];
        }
        if (t.requires_grad(bid)) {
            Array& gb = t.grad(bid);
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] -= g[i];
        }
    });
}

Node Tape::mul(Node a, Node b) {
    require_same_shape(a, b, "mul");
    Array out(a.shape());
    const Array& av = a.value();
    const Array& bv = b.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = av[i] * bv[i];
    }
    const std::size_t aid = a.id, bid = b.id;
    return make(std::move(out), {aid, bid}, [aid, bid](Tape& t, std::size_t self) {
        const Array& g = t.grad(self);
        if (t.requires_grad(aid)) {
            const Array& bv2 = t.value(bid);
            Array& ga = t.grad(aid);
            for (std::size_t i = 0; i < g.size(); ++i) ga[i] += g[i] * bv2[i];
        }
        if (t.requires_grad(bid)) {
            const Array& av2 = t.value(aid);
            Array& gb = t.grad(bid);
            for (std::size_t i = 0; i < g.size(); ++i) gb[i] += g[i] * av2[i];
        }
    });
}

Node Tape::scale(Node a, double factor) {
    Array out(a.shape());
    const Array& av = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = av[i] * factor;
    }
    const std::size_t aid = a.id;
    return make(std::move(out), {aid}, [aid, factor](Tape& t, std::size_t self) {
        if (!t.requires_grad(aid)) return;
        const Array& g = t.grad(self);
        Array& ga = t.grad(aid);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i] * factor;
        }
    });
}

Node Tape::matmul(Node a, Node b) {
    const Shape& sa = a.shape();
    const Shape& sb = b.shape();
    if (sa.size() != 2 || sb.size() != 2 || sa[1] != sb[0]) {
        throw std::invalid_argument("matmul: incompatible shapes " + shape_string(sa) + " and " +
                                    shape_string(sb));
    }
    const std::size_t m = sa[0], k = sa[1], n = sb[1];
    Array out({m, n});
    const double* A = a.value().data();
    const double* B = b.value().data();
    double* C = out.data();
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t l = 0; l < k; ++l) {
            const double av = A[i * k + l];
            const double* brow = B + l * n;
            double* crow = C + i * n;
            for (std::size_t j = 0; j < n; ++j) {
                crow[j] += av * brow[j];
            }
        }
    }
    const std::size_t aid = a.id, bid = b.id;
    return make(std::move(out), {aid, bid}, [aid, bid, m, k, n](Tape& t, std::size_t self) {
        const double* G = t.grad(self).data();
        if (t.requires_grad(aid)) {
            const double* B2 = t.value(bid).data();
            double* GA = t.grad(aid).data();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t l = 0; l < k; ++l) {
                    double acc = 0.0;
                    for (std::size_t j = 0; j < n; ++j) {
                        acc += G[i * n + j] * B2[l * n + j];
                    }
                    GA[i * k + l] += acc;
                }
            }
        }
        if (t.requires_grad(bid)) {
            const double* A2 = t.value(aid).data();
            double* GB = t.grad(bid).data();
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t l = 0; l < k; ++l) {
                    const double av = A2[i * k + l];
                    const double* grow = G + i * n;
                    double* gbrow = GB + l * n;
                    for (std::size_t j = 0; j < n; ++j) {
                        gbrow[j] += av * grow[j];
                    }
                }
            }
        }
    });
}

Node Tape::reshape(Node a, Shape shape) {
    if (shape_size(shape) != a.value().size()) {
        throw std::invalid_argument("reshape: cannot view " + shape_string(a.shape()) + " as " +
                                    shape_string(shape));
    }
    Array out(std::move(shape), a.value().values());
    const std::size_t aid = a.id;
    return make(std::move(out), {aid}, [aid](Tape& t, std::size_t self) {
        if (!t.requires_grad(aid)) return;
        const Array& g = t.grad(self);
        Array& ga = t.grad(aid);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i];
        }
    });
}

Node Tape::slice(Node a, std::size_t begin, std::size_t len) {
    const Shape& sa = a.shape();
    if (sa.empty()) {
        throw std::invalid_argument("slice: input must have at least one axis");
    }
    const std::size_t width = sa.back();
    if (len == 0 || begin + len > width) {
        throw std::invalid_argument("slice: [" + std::to_string(begin) + ", " +
                                    std::to_string(begin + len) + ") outside axis of length " +
                                    std::to_string(width));
    }
    Shape out_shape = sa;
    out_shape.back() = len;
    const std::size_t rows = leading_rows(sa);
    Array out(out_shape);
    const double* src = a.value().data();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t j = 0; j < len; ++j) {
            out[r * len + j] = src[r * width + begin + j];
        }
    }
    const std::size_t aid = a.id;
    return make(std::move(out), {aid}, [aid, rows, width, begin, len](Tape& t, std::size_t self) {
        if (!t.requires_grad(aid)) return;
        const Array& g = t.grad(self);
        Array& ga = t.grad(aid);
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < len; ++j) {
                ga[r * width + begin + j] += g[r * len + j];
            }
        }
    });
}

std::vector<Node> Tape::split(Node a, std::size_t parts) {
    const Shape& sa = a.shape();
    if (sa.empty() || parts == 0 || sa.back() % parts != 0) {
        throw std::invalid_argument("split: last axis of " + shape_string(sa) +
                                    " does not divide into " + std::to_string(parts) + " parts");
    }
    const std::size_t len = sa.back() / parts;
    std::vector<Node> out;
    out.reserve(parts);
    for (std::size_t p = 0; p < parts; ++p) {
        out.push_back(slice(a, p * len, len));
    }
    return out;
}

Node Tape::concat(const std::vector<Node>& parts) {
    if (parts.empty()) {
        throw std::invalid_argument("concat: no inputs");
    }
    Shape lead = parts[0].shape();
    if (lead.empty()) {
        throw std::invalid_argument("concat: inputs must have at least one axis");
    }
    lead.back() = 0;
    std::size_t total_width = 0;
    for (const Node& p : parts) {
        Shape s = p.shape();
        const std::size_t w = s.back();
        s.back() = 0;
        if (s != lead) {
            throw std::invalid_argument("concat: leading axes differ");
        }
        total_width += w;
    }
    Shape out_shape = parts[0].shape();
    out_shape.back() = total_width;
    const std::size_t rows = leading_rows(out_shape);
    Array out(out_shape);
    std::vector<std::size_t> offsets;
    std::vector<std::size_t> widths;
    std::vector<std::size_t> parent_ids;
    std::size_t offset = 0;
    for (const Node& p : parts) {
        const std::size_t w = p.shape().back();
        const double* src = p.value().data();
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t j = 0; j < w; ++j) {
                out[r * total_width + offset + j] = src[r * w + j];
            }
        }
        offsets.push_back(offset);
        widths.push_back(w);
        parent_ids.push_back(p.id);
        offset += w;
    }
    return make(std::move(out), parent_ids,
                [parent_ids, offsets, widths, rows, total_width](Tape& t, std::size_t self) {
                    const Array& g = t.grad(self);
                    for (std::size_t p = 0; p < parent_ids.size(); ++p) {
                        if (!t.requires_grad(parent_ids[p])) continue;
                        Array& gp = t.grad(parent_ids[p]);
                        const std::size_t w = widths[p];
                        for (std::size_t r = 0; r < rows; ++r) {
                            for (std::size_t j = 0; j < w; ++j) {
                                gp[r * w + j] += g[r * total_width + offsets[p] + j];
                            }
                        }
                    }
                });
}

Node Tape::reduce_mean(Node a) {
    const std::size_t n = a.value().size();
    if (n == 0) {
        throw std::invalid_argument("reduce_mean: empty input");
    }
    double sum = 0.0;
    const Array& av = a.value();
    for (std::size_t i = 0; i < n; ++i) {
        sum += av[i];
    }
    Array out({1});
    out[0] = sum / static_cast<double>(n);
    const std::size_t aid = a.id;
    return make(std::move(out), {aid}, [aid, n](Tape& t, std::size_t self) {
        if (!t.requires_grad(aid)) return;
        const double g = t.grad(self)[0] / static_cast<double>(n);
        Array& ga = t.grad(aid);
        for (std::size_t i = 0; i < n; ++i) {
            ga[i] += g;
        }
    });
}

Node Tape::map(Node a, std::function<double(double)> f, std::function<double(double)> dfdx) {
    Array out(a.shape());
    const Array& av = a.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = f(av[i]);
    }
    const std::size_t aid = a.id;
    return make(std::move(out), {aid}, [aid, dfdx = std::move(dfdx)](Tape& t, std::size_t self) {
        if (!t.requires_grad(aid)) return;
        const Array& g = t.grad(self);
        const Array& x = t.value(aid);
        Array& ga = t.grad(aid);
        for (std::size_t i = 0; i < g.size(); ++i) {
            ga[i] += g[i] * dfdx(x[i]);
        }
    });
}

} // namespace mdq::ad
