#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mdq/autodiff.hpp"
#include "mdq/dataset.hpp"
#include "mdq/layers.hpp"
#include "mdq/rng.hpp"
#include "mdq/vqc.hpp"

namespace mdq::model {

enum class Kind { cnn, hqnn };

const char* kind_name(Kind kind);
Kind parse_kind(const std::string& name);

/// Network configuration. Both kinds share the convolutional front-end
/// conv(2->16, 3x3, pad 1) + IN + LReLU -> conv(16->32) + IN + LReLU ->
/// pool -> conv(32->64) + IN + LReLU -> pool -> flatten. The CNN follows
/// with dense 128 -> 64 -> K; the HQNN with dropout after each pool,
/// dense 128 -> m (m = n_circuits*qubits), parallel VQCs, LReLU, and a
/// dense head m -> K.
struct ArchitectureSpec {
    Kind kind = Kind::cnn;
    std::size_t n_classes = 2;       // K: 2 detection, 5 classification
    std::size_t input_bins = 16;     // spectrogram rows
    std::size_t input_frames = 249;  // spectrogram columns

    // HQNN only.
    std::size_t n_circuits = 4;
    std::size_t qubits = 4;
    std::size_t vqc_depth = 2;
    double dropout_p = 0.3;

    std::size_t pre_quantum_width() const { return n_circuits * qubits; }
    std::size_t flat_width() const;
    qc::VqcConfig vqc_config() const { return {qubits, vqc_depth}; }

    void validate() const;
    std::string to_json() const;
    static ArchitectureSpec from_json(const std::string& text);

    bool operator==(const ArchitectureSpec&) const = default;
};

struct NamedParam {
    std::string name;
    Array value;
};

/// A network: its architecture, parameters in a fixed order, and the
/// standardization of the training data it expects at the input.
struct Model {
    ArchitectureSpec spec;
    std::vector<NamedParam> params;
    data::Standardization standardization;

    /// Fresh parameters: Kaiming-uniform weights, zero biases, VQC
    /// angles uniform in (-pi, pi), drawn in parameter order from
    /// Rng(seed).
    static Model build(const ArchitectureSpec& spec, std::uint64_t seed);

    Array& param(const std::string& name);
    const Array& param(const std::string& name) const;
    std::size_t scalar_count() const;
    std::size_t quantum_scalar_count() const;
};

/// Builds the forward graph and returns the [B,K] logits node. input
/// must be [B, 2, input_bins, input_frames]. When training, dropout_rng
/// supplies the dropout masks (HQNN). param_leaves, when given, receives
/// one leaf per Model::params entry so callers can read gradients.
ad::Node forward(ad::Tape& tape, const Model& model, ad::Node input, bool training,
                 Rng* dropout_rng = nullptr, std::vector<ad::Node>* param_leaves = nullptr);

/// Evaluation-mode forward (dropout off): [B,K] logits.
Array forward_logits(const Model& model, const Array& batch);

/// Row-wise softmax of forward_logits.
Array probabilities(const Model& model, const Array& batch);

/// Argmax class per example; ties resolve to the lower class index.
std::vector<int> predict(const Model& model, const Array& batch);

/// Checkpoint container, little-endian: magic "MDQW", u32 format
/// version, JSON header (architecture echo + standardization), u32
/// parameter count, then per parameter a length-prefixed name, u32 rank,
/// u64 dims and binary64 values, ending in a CRC-32 of all prior bytes.
void save_checkpoint(const Model& model, const std::string& path);
Model load_checkpoint(const std::string& path);

} // namespace mdq::model
