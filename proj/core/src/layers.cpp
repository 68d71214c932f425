#include "mdq/layers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>

#include "mdq/parallel.hpp"

namespace mdq::nn {

namespace {

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

inline void axpy(std::size_t n, double a, const double* x, double* y) {
    for (std::size_t i = 0; i < n; ++i) {
        y[i] += a * x[i];
    }
}

inline double dot(std::size_t n, const double* x, const double* y) {
    double a0 = 0, a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0, a6 = 0, a7 = 0;
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        a0 += x[i] * y[i];
        a1 += x[i + 1] * y[i + 1];
        a2 += x[i + 2] * y[i + 2];
        a3 += x[i + 3] * y[i + 3];
        a4 += x[i + 4] * y[i + 4];
        a5 += x[i + 5] * y[i + 5];
        a6 += x[i + 6] * y[i + 6];
        a7 += x[i + 7] * y[i + 7];
    }
    double tail = 0;
    for (; i < n; ++i) {
        tail += x[i] * y[i];
    }
    return ((a0 + a1) + (a2 + a3)) + ((a4 + a5) + (a6 + a7)) + tail;
}

struct ConvDims {
    std::size_t batch, c_in, h, w;
    std::size_t c_out, kh, kw;
    std::size_t stride, pad;
    std::size_t oh, ow;
};

// Valid output-row/column span for kernel offset k under stride 1:
// input index = out index + k - pad must land in [0, extent).
inline void span1(std::size_t k, std::size_t pad, std::size_t out_extent, std::size_t in_extent,
                  std::size_t& lo, std::size_t& hi) {
    lo = pad > k ? pad - k : 0;
    const std::ptrdiff_t limit = static_cast<std::ptrdiff_t>(in_extent + pad) -
                                 static_cast<std::ptrdiff_t>(k);  // exclusive
    hi = limit < 0 ? 0 : std::min(out_extent, static_cast<std::size_t>(limit));
    if (hi < lo) {
        hi = lo;
    }
}

} // namespace

Node conv2d(Tape& tape, Node x, Node w, Node b, std::size_t stride, std::size_t padding) {
    const Shape& xs = x.shape();
    const Shape& ws = w.shape();
    const Shape& bs = b.shape();
    require(xs.size() == 4, "conv2d: input must be [B,C,H,W], got " + shape_string(xs));
    require(ws.size() == 4, "conv2d: weights must be [Cout,Cin,kh,kw], got " + shape_string(ws));
    require(bs.size() == 1 && bs[0] == ws[0], "conv2d: bias must be [Cout]");
    require(xs[1] == ws[1], "conv2d: input channels " + std::to_string(xs[1]) +
                                " do not match kernel channels " + std::to_string(ws[1]));
    require(stride >= 1, "conv2d: stride must be >= 1");

    ConvDims d;
    d.batch = xs[0];
    d.c_in = xs[1];
    d.h = xs[2];
    d.w = xs[3];
    d.c_out = ws[0];
    d.kh = ws[2];
    d.kw = ws[3];
    d.stride = stride;
    d.pad = padding;
    const std::ptrdiff_t oh = (static_cast<std::ptrdiff_t>(d.h) + 2 * padding - d.kh) / stride + 1;
    const std::ptrdiff_t ow = (static_cast<std::ptrdiff_t>(d.w) + 2 * padding - d.kw) / stride + 1;
    require(oh >= 1 && ow >= 1, "conv2d: kernel does not fit the padded input");
    d.oh = static_cast<std::size_t>(oh);
    d.ow = static_cast<std::size_t>(ow);

    Array out({d.batch, d.c_out, d.oh, d.ow});
    const double* X = x.value().data();
    const double* W = w.value().data();
    const double* B = b.value().data();
    double* Y = out.data();

    parallel::parallel_for(d.batch * d.c_out, [&](std::size_t begin, std::size_t end) {
        for (std::size_t item = begin; item < end; ++item) {
            const std::size_t bi = item / d.c_out;
            const std::size_t oc = item % d.c_out;
            double* plane = Y + item * d.oh * d.ow;
            std::fill(plane, plane + d.oh * d.ow, B[oc]);
            for (std::size_t ic = 0; ic < d.c_in; ++ic) {
                const double* xplane = X + (bi * d.c_in + ic) * d.h * d.w;
                const double* wbase = W + ((oc * d.c_in + ic) * d.kh) * d.kw;
                for (std::size_t kh = 0; kh < d.kh; ++kh) {
                    for (std::size_t kw = 0; kw < d.kw; ++kw) {
                        const double coef = wbase[kh * d.kw + kw];
                        if (d.stride == 1) {
                            std::size_t oh_lo, oh_hi, ow_lo, ow_hi;
                            span1(kh, d.pad, d.oh, d.h, oh_lo, oh_hi);
                            span1(kw, d.pad, d.ow, d.w, ow_lo, ow_hi);
                            for (std::size_t r = oh_lo; r < oh_hi; ++r) {
                                const std::size_t ih = r + kh - d.pad;
                                axpy(ow_hi - ow_lo, coef,
                                     xplane + ih * d.w + (ow_lo + kw - d.pad),
                                     plane + r * d.ow + ow_lo);
                            }
                        } else {
                            for (std::size_t r = 0; r < d.oh; ++r) {
                                const std::ptrdiff_t ih = static_cast<std::ptrdiff_t>(r * d.stride + kh) -
                                                          static_cast<std::ptrdiff_t>(d.pad);
                                if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(d.h)) continue;
                                for (std::size_t c = 0; c < d.ow; ++c) {
                                    const std::ptrdiff_t iw =
                                        static_cast<std::ptrdiff_t>(c * d.stride + kw) -
                                        static_cast<std::ptrdiff_t>(d.pad);
                                    if (iw < 0 || iw >= static_cast<std::ptrdiff_t>(d.w)) continue;
                                    plane[r * d.ow + c] += coef * xplane[ih * d.w + iw];
                                }
                            }
                        }
                    }
                }
            }
        }
    });

    const std::size_t xid = x.id, wid = w.id, bid = b.id;
    return tape.make(std::move(out), {xid, wid, bid}, [xid, wid, bid, d](Tape& t, std::size_t self) {
        const double* G = t.grad(self).data();
        const double* X2 = t.value(xid).data();
        const double* W2 = t.value(wid).data();

        if (t.requires_grad(xid)) {
            double* GX = t.grad(xid).data();
            parallel::parallel_for(d.batch, [&](std::size_t begin, std::size_t end) {
                for (std::size_t bi = begin; bi < end; ++bi) {
                    for (std::size_t oc = 0; oc < d.c_out; ++oc) {
                        const double* gplane = G + (bi * d.c_out + oc) * d.oh * d.ow;
                        for (std::size_t ic = 0; ic < d.c_in; ++ic) {
                            double* gxplane = GX + (bi * d.c_in + ic) * d.h * d.w;
                            const double* wbase = W2 + ((oc * d.c_in + ic) * d.kh) * d.kw;
                            for (std::size_t kh = 0; kh < d.kh; ++kh) {
                                for (std::size_t kw = 0; kw < d.kw; ++kw) {
                                    const double coef = wbase[kh * d.kw + kw];
                                    if (d.stride == 1) {
                                        std::size_t oh_lo, oh_hi, ow_lo, ow_hi;
                                        span1(kh, d.pad, d.oh, d.h, oh_lo, oh_hi);
                                        span1(kw, d.pad, d.ow, d.w, ow_lo, ow_hi);
                                        for (std::size_t r = oh_lo; r < oh_hi; ++r) {
                                            const std::size_t ih = r + kh - d.pad;
                                            axpy(ow_hi - ow_lo, coef, gplane + r * d.ow + ow_lo,
                                                 gxplane + ih * d.w + (ow_lo + kw - d.pad));
                                        }
                                    } else {
                                        for (std::size_t r = 0; r < d.oh; ++r) {
                                            const std::ptrdiff_t ih =
                                                static_cast<std::ptrdiff_t>(r * d.stride + kh) -
                                                static_cast<std::ptrdiff_t>(d.pad);
                                            if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(d.h))
                                                continue;
                                            for (std::size_t c = 0; c < d.ow; ++c) {
                                                const std::ptrdiff_t iw =
                                                    static_cast<std::ptrdiff_t>(c * d.stride + kw) -
                                                    static_cast<std::ptrdiff_t>(d.pad);
                                                if (iw < 0 ||
                                                    iw >= static_cast<std::ptrdiff_t>(d.w))
                                                    continue;
                                                gxplane[ih * d.w + iw] +=
                                                    coef * gplane[r * d.ow + c];
                                            }
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            });
        }

        if (t.requires_grad(wid)) {
            double* GW = t.grad(wid).data();
            parallel::parallel_for(d.c_out, [&](std::size_t begin, std::size_t end) {
                for (std::size_t oc = begin; oc < end; ++oc) {
                    for (std::size_t bi = 0; bi < d.batch; ++bi) {
                        const double* gplane = G + (bi * d.c_out + oc) * d.oh * d.ow;
                        for (std::size_t ic = 0; ic < d.c_in; ++ic) {
                            const double* xplane = X2 + (bi * d.c_in + ic) * d.h * d.w;
                            double* gw = GW + ((oc * d.c_in + ic) * d.kh) * d.kw;
                            for (std::size_t kh = 0; kh < d.kh; ++kh) {
                                for (std::size_t kw = 0; kw < d.kw; ++kw) {
                                    double acc = 0.0;
                                    if (d.stride == 1) {
                                        std::size_t oh_lo, oh_hi, ow_lo, ow_hi;
                                        span1(kh, d.pad, d.oh, d.h, oh_lo, oh_hi);
                                        span1(kw, d.pad, d.ow, d.w, ow_lo, ow_hi);
                                        for (std::size_t r = oh_lo; r < oh_hi; ++r) {
                                            const std::size_t ih = r + kh - d.pad;
                                            acc += dot(ow_hi - ow_lo, gplane + r * d.ow + ow_lo,
                                                       xplane + ih * d.w + (ow_lo + kw - d.pad));
                                        }
                                    } else {
                                        for (std::size_t r = 0; r < d.oh; ++r) {
                                            const std::ptrdiff_t ih =
                                                static_cast<std::ptrdiff_t>(r * d.stride + kh) -
                                                static_cast<std::ptrdiff_t>(d.pad);
                                            if (ih < 0 || ih >= static_cast<std::ptrdiff_t>(d.h))
                                                continue;
                                            for (std::size_t c = 0; c < d.ow; ++c) {
                                                const std::ptrdiff_t iw =
                                                    static_cast<std::ptrdiff_t>(c * d.stride + kw) -
                                                    static_cast<std::ptrdiff_t>(d.pad);
                                                if (iw < 0 ||
                                                    iw >= static_cast<std::ptrdiff_t>(d.w))
                                                    continue;
                                                acc += gplane[r * d.ow + c] * xplane[ih * d.w + iw];
                                            }
                                        }
                                    }
                                    gw[kh * d.kw + kw] += acc;
                                }
                            }
                        }
                    }
                }
            });
        }

        if (t.requires_grad(bid)) {
            double* GB = t.grad(bid).data();
            parallel::parallel_for(d.c_out, [&](std::size_t begin, std::size_t end) {
                for (std::size_t oc = begin; oc < end; ++oc) {
                    double acc = 0.0;
                    for (std::size_t bi = 0; bi < d.batch; ++bi) {
                        const double* gplane = G + (bi * d.c_out + oc) * d.oh * d.ow;
                        for (std::size_t i = 0; i < d.oh * d.ow; ++i) {
                            acc += gplane[i];
                        }
                    }
                    GB[oc] += acc;
                }
            });
        }
    });
}

Node instance_norm(Tape& tape, Node x, double eps) {
    const Shape& xs = x.shape();
    require(xs.size() == 4, "instance_norm: input must be [B,C,H,W], got " + shape_string(xs));
    const std::size_t planes = xs[0] * xs[1];
    const std::size_t plane_size = xs[2] * xs[3];
    require(plane_size >= 2, "instance_norm: spatial size must be >= 2");
    require(eps > 0.0, "instance_norm: eps must be positive");

    Array out(xs);
    auto inv_sigma = std::make_shared<std::vector<double>>(planes);
    const double* X = x.value().data();
    double* Y = out.data();
    parallel::parallel_for(planes, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const double* in = X + p * plane_size;
            double* o = Y + p * plane_size;
            double sum = 0.0;
            for (std::size_t i = 0; i < plane_size; ++i) {
                sum += in[i];
            }
            const double mean = sum / static_cast<double>(plane_size);
            double sq = 0.0;
            for (std::size_t i = 0; i < plane_size; ++i) {
                const double dv = in[i] - mean;
                sq += dv * dv;
            }
            const double inv = 1.0 / std::sqrt(sq / static_cast<double>(plane_size) + eps);
            (*inv_sigma)[p] = inv;
            for (std::size_t i = 0; i < plane_size; ++i) {
                o[i] = (in[i] - mean) * inv;
            }
        }
    });

    const std::size_t xid = x.id;
    return tape.make(std::move(out), {xid},
                     [xid, planes, plane_size, inv_sigma](Tape& t, std::size_t self) {
                         if (!t.requires_grad(xid)) return;
                         const double* G = t.grad(self).data();
                         const double* Y2 = t.value(self).data();
                         double* GX = t.grad(xid).data();
                         parallel::parallel_for(planes, [&](std::size_t begin, std::size_t end) {
                             for (std::size_t p = begin; p < end; ++p) {
                                 const double* g = G + p * plane_size;
                                 const double* y = Y2 + p * plane_size;
                                 double* gx = GX + p * plane_size;
                                 const double inv = (*inv_sigma)[p];
                                 double mean_g = 0.0, mean_gy = 0.0;
                                 for (std::size_t i = 0; i < plane_size; ++i) {
                                     mean_g += g[i];
                                     mean_gy += g[i] * y[i];
                                 }
                                 mean_g /= static_cast<double>(plane_size);
                                 mean_gy /= static_cast<double>(plane_size);
                                 for (std::size_t i = 0; i < plane_size; ++i) {
                                     gx[i] += inv * (g[i] - mean_g - y[i] * mean_gy);
                                 }
                             }
                         });
                     });
}

Node leaky_relu(Tape& tape, Node x, double slope) {
    Array out(x.shape());
    const Array& xv = x.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = xv[i] > 0.0 ? xv[i] : slope * xv[i];
    }
    const std::size_t xid = x.id;
    return tape.make(std::move(out), {xid}, [xid, slope](Tape& t, std::size_t self) {
        if (!t.requires_grad(xid)) return;
        const Array& g = t.grad(self);
        const Array& xv2 = t.value(xid);
        Array& gx = t.grad(xid);
        for (std::size_t i = 0; i < g.size(); ++i) {
            gx[i] += g[i] * (xv2[i] > 0.0 ? 1.0 : slope);
        }
    });
}

Node max_pool2d(Tape& tape, Node x) {
    const Shape& xs = x.shape();
    require(xs.size() == 4, "max_pool2d: input must be [B,C,H,W], got " + shape_string(xs));
    const std::size_t planes = xs[0] * xs[1];
    const std::size_t h = xs[2], w = xs[3];
    const std::size_t oh = h / 2, ow = w / 2;
    require(oh >= 1 && ow >= 1, "max_pool2d: spatial extent must be >= 2");

    Array out({xs[0], xs[1], oh, ow});
    auto argmax = std::make_shared<std::vector<std::uint32_t>>(planes * oh * ow);
    const double* X = x.value().data();
    double* Y = out.data();
    parallel::parallel_for(planes, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const double* in = X + p * h * w;
            double* o = Y + p * oh * ow;
            std::uint32_t* am = argmax->data() + p * oh * ow;
            for (std::size_t r = 0; r < oh; ++r) {
                for (std::size_t c = 0; c < ow; ++c) {
                    // Row-major scan keeps the first index on ties.
                    std::size_t best = (2 * r) * w + 2 * c;
                    double best_v = in[best];
                    const std::size_t candidates[3] = {(2 * r) * w + 2 * c + 1,
                                                       (2 * r + 1) * w + 2 * c,
                                                       (2 * r + 1) * w + 2 * c + 1};
                    for (std::size_t cand : candidates) {
                        if (in[cand] > best_v) {
                            best_v = in[cand];
                            best = cand;
                        }
                    }
                    o[r * ow + c] = best_v;
                    am[r * ow + c] = static_cast<std::uint32_t>(best);
                }
            }
        }
    });

    const std::size_t xid = x.id;
    return tape.make(std::move(out), {xid},
                     [xid, planes, h, w, oh, ow, argmax](Tape& t, std::size_t self) {
                         if (!t.requires_grad(xid)) return;
                         const double* G = t.grad(self).data();
                         double* GX = t.grad(xid).data();
                         parallel::parallel_for(planes, [&](std::size_t begin, std::size_t end) {
                             for (std::size_t p = begin; p < end; ++p) {
                                 const double* g = G + p * oh * ow;
                                 double* gx = GX + p * h * w;
                                 const std::uint32_t* am = argmax->data() + p * oh * ow;
                                 for (std::size_t i = 0; i < oh * ow; ++i) {
                                     gx[am[i]] += g[i];
                                 }
                             }
                         });
                     });
}

Node dropout(Tape& tape, Node x, double p, bool training, Rng& rng) {
    require(p >= 0.0 && p < 1.0, "dropout: p must lie in [0, 1)");
    if (!training || p == 0.0) {
        return x;
    }
    const double keep_scale = 1.0 / (1.0 - p);
    auto mask = std::make_shared<std::vector<double>>(x.value().size());
    for (double& m : *mask) {
        m = rng.uniform() < p ? 0.0 : keep_scale;
    }
    Array out(x.shape());
    const Array& xv = x.value();
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = xv[i] * (*mask)[i];
    }
    const std::size_t xid = x.id;
    return tape.make(std::move(out), {xid}, [xid, mask](Tape& t, std::size_t self) {
        if (!t.requires_grad(xid)) return;
        const Array& g = t.grad(self);
        Array& gx = t.grad(xid);
        for (std::size_t i = 0; i < g.size(); ++i) {
            gx[i] += g[i] * (*mask)[i];
        }
    });
}

Node dense(Tape& tape, Node x, Node w, Node b) {
    const Shape& xs = x.shape();
    const Shape& ws = w.shape();
    const Shape& bs = b.shape();
    require(xs.size() == 2, "dense: input must be [B,Fin], got " + shape_string(xs));
    require(ws.size() == 2, "dense: weights must be [Fout,Fin], got " + shape_string(ws));
    require(xs[1] == ws[1], "dense: input width " + std::to_string(xs[1]) +
                                " does not match weight fan-in " + std::to_string(ws[1]));
    require(bs.size() == 1 && bs[0] == ws[0], "dense: bias must be [Fout]");
    const std::size_t batch = xs[0], fin = xs[1], fout = ws[0];

    Array out({batch, fout});
    const double* X = x.value().data();
    const double* W = w.value().data();
    const double* B = b.value().data();
    double* Y = out.data();
    parallel::parallel_for(batch, [&](std::size_t begin, std::size_t end) {
        for (std::size_t bi = begin; bi < end; ++bi) {
            const double* xrow = X + bi * fin;
            double* yrow = Y + bi * fout;
            for (std::size_t o = 0; o < fout; ++o) {
                yrow[o] = dot(fin, W + o * fin, xrow) + B[o];
            }
        }
    });

    const std::size_t xid = x.id, wid = w.id, bid = b.id;
    return tape.make(std::move(out), {xid, wid, bid},
                     [xid, wid, bid, batch, fin, fout](Tape& t, std::size_t self) {
                         const double* G = t.grad(self).data();
                         if (t.requires_grad(xid)) {
                             const double* W2 = t.value(wid).data();
                             double* GX = t.grad(xid).data();
                             parallel::parallel_for(batch, [&](std::size_t begin, std::size_t end) {
                                 for (std::size_t bi = begin; bi < end; ++bi) {
                                     const double* grow = G + bi * fout;
                                     double* gxrow = GX + bi * fin;
                                     for (std::size_t o = 0; o < fout; ++o) {
                                         axpy(fin, grow[o], W2 + o * fin, gxrow);
                                     }
                                 }
                             });
                         }
                         if (t.requires_grad(wid)) {
                             const double* X2 = t.value(xid).data();
                             double* GW = t.grad(wid).data();
                             parallel::parallel_for(fout, [&](std::size_t begin, std::size_t end) {
                                 for (std::size_t o = begin; o < end; ++o) {
                                     double* gwrow = GW + o * fin;
                                     for (std::size_t bi = 0; bi < batch; ++bi) {
                                         axpy(fin, G[bi * fout + o], X2 + bi * fin, gwrow);
                                     }
                                 }
                             });
                         }
                         if (t.requires_grad(bid)) {
                             Array& gb = t.grad(bid);
                             for (std::size_t o = 0; o < fout; ++o) {
                                 double acc = 0.0;
                                 for (std::size_t bi = 0; bi < batch; ++bi) {
                                     acc += G[bi * fout + o];
                                 }
                                 gb[o] += acc;
                             }
                         }
                     });
}

Node flatten(Tape& tape, Node x) {
    const Shape& xs = x.shape();
    require(!xs.empty(), "flatten: input must have at least one axis");
    std::size_t rest = 1;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        rest *= xs[i];
    }
    return tape.reshape(x, {xs[0], rest});
}

Node softmax_cross_entropy(Tape& tape, Node logits, const std::vector<int>& labels) {
    const Shape& ls = logits.shape();
    require(ls.size() == 2, "softmax_cross_entropy: logits must be [B,K], got " +
                                shape_string(ls));
    const std::size_t batch = ls[0], k = ls[1];
    require(labels.size() == batch, "softmax_cross_entropy: " + std::to_string(labels.size()) +
                                        " labels for batch of " + std::to_string(batch));
    for (int label : labels) {
        require(label >= 0 && static_cast<std::size_t>(label) < k,
                "softmax_cross_entropy: label " + std::to_string(label) + " outside [0, " +
                    std::to_string(k) + ")");
    }

    auto probs = std::make_shared<std::vector<double>>(batch * k);
    const double* L = logits.value().data();
    double loss_sum = 0.0;
    for (std::size_t bi = 0; bi < batch; ++bi) {
        const double* row = L + bi * k;
        double max_v = row[0];
        for (std::size_t j = 1; j < k; ++j) {
            max_v = std::max(max_v, row[j]);
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            denom += std::exp(row[j] - max_v);
        }
        const double log_denom = std::log(denom);
        for (std::size_t j = 0; j < k; ++j) {
            (*probs)[bi * k + j] = std::exp(row[j] - max_v) / denom;
        }
        loss_sum += log_denom - (row[labels[bi]] - max_v);
    }
    Array out({1});
    out[0] = loss_sum / static_cast<double>(batch);

    const std::size_t lid = logits.id;
    return tape.make(std::move(out), {lid},
                     [lid, batch, k, labels, probs](Tape& t, std::size_t self) {
                         if (!t.requires_grad(lid)) return;
                         const double g = t.grad(self)[0] / static_cast<double>(batch);
                         Array& gl = t.grad(lid);
                         for (std::size_t bi = 0; bi < batch; ++bi) {
                             for (std::size_t j = 0; j < k; ++j) {
                                 const double one_hot =
                                     static_cast<std::size_t>(labels[bi]) == j ? 1.0 : 0.0;
                                 gl[bi * k + j] += g * ((*probs)[bi * k + j] - one_hot);
                             }
                         }
                     });
}

Array softmax(const Array& logits) {
    const Shape& ls = logits.shape();
    if (ls.size() != 2) {
        throw std::invalid_argument("softmax: logits must be [B,K], got " + shape_string(ls));
    }
    const std::size_t batch = ls[0], k = ls[1];
    Array out(ls);
    for (std::size_t bi = 0; bi < batch; ++bi) {
        const double* row = logits.data() + bi * k;
        double* orow = out.data() + bi * k;
        double max_v = row[0];
        for (std::size_t j = 1; j < k; ++j) {
            max_v = std::max(max_v, row[j]);
        }
        double denom = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            orow[j] = std::exp(row[j] - max_v);
            denom += orow[j];
        }
        for (std::size_t j = 0; j < k; ++j) {
            orow[j] /= denom;
        }
    }
    return out;
}

void kaiming_uniform_fill(Array& w, std::size_t fan_in, Rng& rng) {
    if (fan_in == 0) {
        throw std::invalid_argument("kaiming_uniform_fill: fan_in must be positive");
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] = rng.uniform(-bound, bound);
    }
}

} // namespace mdq::nn
