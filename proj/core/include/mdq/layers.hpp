#pragma once

#include <cstddef>
#include <vector>

#include "mdq/autodiff.hpp"
#include "mdq/rng.hpp"

namespace mdq::nn {

using ad::Node;
using ad::Tape;

/// Cross-correlation plus bias. x [B,Cin,H,W], w [Cout,Cin,kh,kw],
/// b [Cout] -> [B,Cout,H',W'] with H' = floor((H+2p-kh)/stride)+1.
Node conv2d(Tape& tape, Node x, Node w, Node b, std::size_t stride = 1, std::size_t padding = 0);

/// Per example and channel: (x - mean)/sqrt(var + eps), population
/// variance, no learned affine. x [B,C,H,W] with H*W >= 2.
Node instance_norm(Tape& tape, Node x, double eps = 1e-5);

/// max(x, slope*x) elementwise; the subgradient at 0 takes the slope side.
Node leaky_relu(Tape& tape, Node x, double slope = 0.01);

/// 2x2 window, stride 2, floor semantics (odd trailing row/column
/// dropped). The gradient routes to the first argmax in row-major order.
Node max_pool2d(Tape& tape, Node x);

/// Inverted dropout: zero with probability p, survivors scaled by
/// 1/(1-p); identity when training is false or p == 0. The mask is drawn
/// from rng in element order on the calling thread.
Node dropout(Tape& tape, Node x, double p, bool training, Rng& rng);

/// x [B,Fin], w [Fout,Fin], b [Fout] -> [B,Fout]
Node dense(Tape& tape, Node x, Node w, Node b);

/// [B, d1, d2, ...] -> [B, d1*d2*...]
Node flatten(Tape& tape, Node x);

/// Mean over the batch of the stabilized -log softmax(logits)[label].
/// logits [B,K]; labels holds B class ids in [0,K).
Node softmax_cross_entropy(Tape& tape, Node logits, const std::vector<int>& labels);

/// Row-wise softmax of [B,K]; plain inference helper, no tape.
Array softmax(const Array& logits);

/// Fills w with U(-bound, bound), bound = sqrt(6/fan_in).
void kaiming_uniform_fill(Array& w, std::size_t fan_in, Rng& rng);

} // namespace mdq::nn
