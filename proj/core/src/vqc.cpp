#include "mdq/vqc.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mdq/parallel.hpp"

namespace mdq::qc {

namespace {

using cplx = std::complex<double>;

void apply_1q(StateVector& state, std::size_t qubit, cplx g00, cplx g01, cplx g10, cplx g11) {
    const std::size_t bit = std::size_t{1} << qubit;
    const std::size_t n = state.size();
    for (std::size_t base = 0; base < n; base += 2 * bit) {
        for (std::size_t off = 0; off < bit; ++off) {
            const std::size_t i0 = base + off;
            const std::size_t i1 = i0 + bit;
            const cplx a0 = state[i0];
            const cplx a1 = state[i1];
            state[i0] = g00 * a0 + g01 * a1;
            state[i1] = g10 * a0 + g11 * a1;
        }
    }
}

} // namespace

void VqcConfig::validate() const {
    if (qubits < 1 || qubits > 12) {
        throw std::invalid_argument("VqcConfig: qubits must lie in [1, 12], got " +
                                    std::to_string(qubits));
    }
    if (depth < 1) {
        throw std::invalid_argument("VqcConfig: depth must be >= 1");
    }
}

void apply_rx(StateVector& state, std::size_t qubit, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_1q(state, qubit, {c, 0}, {0, -s}, {0, -s}, {c, 0});
}

void apply_ry(StateVector& state, std::size_t qubit, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_1q(state, qubit, {c, 0}, {-s, 0}, {s, 0}, {c, 0});
}

void apply_rz(StateVector& state, std::size_t qubit, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    apply_1q(state, qubit, {c, -s}, {0, 0}, {0, 0}, {c, s});
}

void apply_rot(StateVector& state, std::size_t qubit, double a, double b, double c) {
    apply_rz(state, qubit, a);
    apply_ry(state, qubit, b);
    apply_rz(state, qubit, c);
}

void apply_cnot(StateVector& state, std::size_t control, std::size_t target) {
    if (control == target) {
        throw std::invalid_argument("apply_cnot: control equals target");
    }
    const std::size_t cbit = std::size_t{1} << control;
    const std::size_t tbit = std::size_t{1} << target;
    const std::size_t n = state.size();
    for (std::size_t i = 0; i < n; ++i) {
        if ((i & cbit) != 0 && (i & tbit) == 0) {
            std::swap(state[i], state[i | tbit]);
        }
    }
}

StateVector embed(const std::vector<double>& x) {
    VqcConfig probe{x.size(), 1};
    probe.validate();
    StateVector state(probe.state_size(), cplx{0.0, 0.0});
    state[0] = 1.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        apply_rx(state, j, x[j]);
    }
    return state;
}

void apply_variational(StateVector& state, const double* angles, const VqcConfig& cfg) {
    cfg.validate();
    if (state.size() != cfg.state_size()) {
        throw std::invalid_argument("apply_variational: state size does not match qubit count");
    }
    const std::size_t q = cfg.qubits;
    for (std::size_t r = 0; r < cfg.depth; ++r) {
        const double* rep = angles + r * q * 3;
        for (std::size_t j = 0; j < q; ++j) {
            apply_rot(state, j, rep[j * 3], rep[j * 3 + 1], rep[j * 3 + 2]);
        }
        if (q > 1) {
            for (std::size_t j = 0; j < q; ++j) {
                apply_cnot(state, j, (j + 1) % q);
            }
        }
    }
}

std::vector<double> measure_y(const StateVector& state, std::size_t qubits) {
    if (state.size() != (std::size_t{1} << qubits)) {
        throw std::invalid_argument("measure_y: state size does not match qubit count");
    }
    std::vector<double> v(qubits);
    for (std::size_t j = 0; j < qubits; ++j) {
        const std::size_t bit = std::size_t{1} << j;
        double acc = 0.0;
        for (std::size_t base = 0; base < state.size(); base += 2 * bit) {
            for (std::size_t off = 0; off < bit; ++off) {
                const std::size_t i0 = base + off;
                // <a0,a1| Y |a0,a1> = -2 Im(conj(a1) a0)
                acc += std::imag(std::conj(state[i0 + bit]) * state[i0]);
            }
        }
        v[j] = -2.0 * acc;
    }
    return v;
}

std::vector<double> quantum_layer_forward(const std::vector<double>& x, const double* angles,
                                          const VqcConfig& cfg) {
    cfg.validate();
    if (x.size() != cfg.qubits) {
        throw std::invalid_argument("quantum_layer_forward: expected " +
                                    std::to_string(cfg.qubits) + " features, got " +
                                    std::to_string(x.size()));
    }
    StateVector state = embed(x);
    apply_variational(state, angles, cfg);
    return measure_y(state, cfg.qubits);
}

void quantum_layer_gradient(const std::vector<double>& x, const double* angles,
                            const VqcConfig& cfg, std::vector<double>& dv_dx,
                            std::vector<double>& dv_dangles) {
    const std::size_t q = cfg.qubits;
    const std::size_t n_params = cfg.n_params();
    dv_dx.assign(q * q, 0.0);
    dv_dangles.assign(q * n_params, 0.0);

    std::vector<double> shifted_x = x;
    for (std::size_t i = 0; i < q; ++i) {
        shifted_x[i] = x[i] + std::numbers::pi / 2.0;
        const std::vector<double> plus = quantum_layer_forward(shifted_x, angles, cfg);
        shifted_x[i] = x[i] - std::numbers::pi / 2.0;
        const std::vector<double> minus = quantum_layer_forward(shifted_x, angles, cfg);
        shifted_x[i] = x[i];
        for (std::size_t j = 0; j < q; ++j) {
            dv_dx[j * q + i] = (plus[j] - minus[j]) / 2.0;
        }
    }

    std::vector<double> shifted(angles, angles + n_params);
    for (std::size_t p = 0; p < n_params; ++p) {
        shifted[p] = angles[p] + std::numbers::pi / 2.0;
        const std::vector<double> plus = quantum_layer_forward(x, shifted.data(), cfg);
        shifted[p] = angles[p] - std::numbers::pi / 2.0;
        const std::vector<double> minus = quantum_layer_forward(x, shifted.data(), cfg);
        shifted[p] = angles[p];
        for (std::size_t j = 0; j < q; ++j) {
            dv_dangles[j * n_params + p] = (plus[j] - minus[j]) / 2.0;
        }
    }
}

ad::Node quantum_dense(ad::Tape& tape, ad::Node x, ad::Node angles, const VqcConfig& cfg) {
    cfg.validate();
    const Shape& xs = x.shape();
    const Shape& as = angles.shape();
    const std::size_t q = cfg.qubits;
    if (xs.size() != 2 || xs[1] % q != 0 || xs[1] == 0) {
        throw std::invalid_argument("quantum_dense: input must be [B, circuits*" +
                                    std::to_string(q) + "], got " + shape_string(xs));
    }
    const std::size_t batch = xs[0];
    const std::size_t circuits = xs[1] / q;
    const Shape expected{circuits, cfg.depth, q, 3};
    if (as != expected) {
        throw std::invalid_argument("quantum_dense: angles must be " + shape_string(expected) +
                                    ", got " + shape_string(as));
    }
    const std::size_t n_params = cfg.n_params();
    const std::size_t width = xs[1];

    Array out(xs);
    const double* X = x.value().data();
    const double* A = angles.value().data();
    double* Y = out.data();
    parallel::parallel_for(batch * circuits, [&](std::size_t begin, std::size_t end) {
        std::vector<double> features(q);
        for (std::size_t item = begin; item < end; ++item) {
            const std::size_t bi = item / circuits;
            const std::size_t ci = item % circuits;
            const double* src = X + bi * width + ci * q;
            for (std::size_t j = 0; j < q; ++j) {
                features[j] = src[j];
            }
            const std::vector<double> v =
                quantum_layer_forward(features, A + ci * n_params, cfg);
            double* dst = Y + bi * width + ci * q;
            for (std::size_t j = 0; j < q; ++j) {
                dst[j] = v[j];
            }
        }
    });

    const std::size_t xid = x.id, aid = angles.id;
    return tape.make(
        std::move(out), {xid, aid},
        [xid, aid, cfg, batch, circuits, q, n_params, width](ad::Tape& t, std::size_t self) {
            const double* G = t.grad(self).data();
            const double* X2 = t.value(xid).data();
            const double* A2 = t.value(aid).data();
            const bool need_x = t.requires_grad(xid);
            const bool need_a = t.requires_grad(aid);
            if (!need_x && !need_a) return;

            // Per-(example, circuit) Jacobians land in private buffers;
            // the angle-gradient reduction then runs in fixed order.
            std::vector<std::vector<double>> jac_x(batch * circuits);
            std::vector<std::vector<double>> jac_a(batch * circuits);
            parallel::parallel_for(batch * circuits, [&](std::size_t begin, std::size_t end) {
                std::vector<double> features(q);
                for (std::size_t item = begin; item < end; ++item) {
                    const std::size_t bi = item / circuits;
                    const std::size_t ci = item % circuits;
                    const double* src = X2 + bi * width + ci * q;
                    for (std::size_t j = 0; j < q; ++j) {
                        features[j] = src[j];
                    }
                    quantum_layer_gradient(features, A2 + ci * n_params, cfg, jac_x[item],
                                           jac_a[item]);
                }
            });

            if (need_x) {
                double* GX = t.grad(xid).data();
                parallel::parallel_for(batch * circuits, [&](std::size_t begin, std::size_t end) {
                    for (std::size_t item = begin; item < end; ++item) {
                        const std::size_t bi = item / circuits;
                        const std::size_t ci = item % circuits;
                        const double* gy = G + bi * width + ci * q;
                        double* gx = GX + bi * width + ci * q;
                        const std::vector<double>& jx = jac_x[item];
                        for (std::size_t i = 0; i < q; ++i) {
                            double acc = 0.0;
                            for (std::size_t j = 0; j < q; ++j) {
                                acc += gy[j] * jx[j * q + i];
                            }
                            gx[i] += acc;
                        }
                    }
                });
            }
            if (need_a) {
                double* GA = t.grad(aid).data();
                for (std::size_t bi = 0; bi < batch; ++bi) {
                    for (std::size_t ci = 0; ci < circuits; ++ci) {
                        const double* gy = G + bi * width + ci * q;
                        const std::vector<double>& ja = jac_a[bi * circuits + ci];
                        double* ga = GA + ci * n_params;
                        for (std::size_t j = 0; j < q; ++j) {
                            const double gj = gy[j];
                            const double* row = ja.data() + j * n_params;
                            for (std::size_t p = 0; p < n_params; ++p) {
                                ga[p] += gj * row[p];
                            }
                        }
                    }
                }
            }
        });
}

} // namespace mdq::qc
