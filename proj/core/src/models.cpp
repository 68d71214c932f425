#include "mdq/models.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "mdq/errors.hpp"
#include "mdq/serial_io.hpp"

namespace mdq::model {

namespace {

using nlohmann::json;

constexpr std::uint32_t kCheckpointVersion = 1;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

} // namespace

const char* kind_name(Kind kind) {
    return kind == Kind::cnn ? "cnn" : "hqnn";
}

Kind parse_kind(const std::string& name) {
    if (name == "cnn") return Kind::cnn;
    if (name == "hqnn") return Kind::hqnn;
    throw std::invalid_argument("unknown model kind \"" + name + "\" (expected cnn or hqnn)");
}

std::size_t ArchitectureSpec::flat_width() const {
    return 64 * (input_bins / 2 / 2) * (input_frames / 2 / 2);
}

void ArchitectureSpec::validate() const {
    require(n_classes == 2 || n_classes == 5,
            "ArchitectureSpec: n_classes must be 2 or 5, got " + std::to_string(n_classes));
    require(input_bins / 4 >= 1 && input_frames / 4 >= 1,
            "ArchitectureSpec: input must survive two 2x2 pools, got " +
                std::to_string(input_bins) + "x" + std::to_string(input_frames));
    if (kind == Kind::hqnn) {
        require(n_circuits >= 1, "ArchitectureSpec: n_circuits must be >= 1");
        vqc_config().validate();
        require(dropout_p >= 0.0 && dropout_p < 1.0,
                "ArchitectureSpec: dropout_p must lie in [0, 1)");
    }
}

std::string ArchitectureSpec::to_json() const {
    json j;
    j["kind"] = kind_name(kind);
    j["n_classes"] = n_classes;
    j["input_bins"] = input_bins;
    j["input_frames"] = input_frames;
    j["n_circuits"] = n_circuits;
    j["qubits"] = qubits;
    j["vqc_depth"] = vqc_depth;
    j["dropout_p"] = dropout_p;
    return j.dump();
}

ArchitectureSpec ArchitectureSpec::from_json(const std::string& text) {
    try {
        const json j = json::parse(text);
        ArchitectureSpec spec;
        spec.kind = parse_kind(j.at("kind").get<std::string>());
        spec.n_classes = j.at("n_classes").get<std::size_t>();
        spec.input_bins = j.at("input_bins").get<std::size_t>();
        spec.input_frames = j.at("input_frames").get<std::size_t>();
        spec.n_circuits = j.at("n_circuits").get<std::size_t>();
        spec.qubits = j.at("qubits").get<std::size_t>();
        spec.vqc_depth = j.at("vqc_depth").get<std::size_t>();
        spec.dropout_p = j.at("dropout_p").get<double>();
        return spec;
    } catch (const json::exception& e) {
        throw io_error(std::string("bad architecture JSON: ") + e.what());
    }
}

namespace {

// Parameter order is the contract for checkpoints and gradient walks:
// conv1..conv3, fc1, fc2, [vqc.angles], head.
std::vector<NamedParam> parameter_skeleton(const ArchitectureSpec& spec) {
    const std::size_t flat = spec.flat_width();
    const std::size_t m = spec.pre_quantum_width();
    std::vector<NamedParam> params;
    params.push_back({"conv1.w", Array({16, 2, 3, 3})});
    params.push_back({"conv1.b", Array({16})});
    params.push_back({"conv2.w", Array({32, 16, 3, 3})});
    params.push_back({"conv2.b", Array({32})});
    params.push_back({"conv3.w", Array({64, 32, 3, 3})});
    params.push_back({"conv3.b", Array({64})});
    params.push_back({"fc1.w", Array({128, flat})});
    params.push_back({"fc1.b", Array({128})});
    if (spec.kind == Kind::cnn) {
        params.push_back({"fc2.w", Array({64, 128})});
        params.push_back({"fc2.b", Array({64})});
        params.push_back({"head.w", Array({spec.n_classes, 64})});
        params.push_back({"head.b", Array({spec.n_classes})});
    } else {
        params.push_back({"fc2.w", Array({m, 128})});
        params.push_back({"fc2.b", Array({m})});
        params.push_back(
            {"vqc.angles", Array({spec.n_circuits, spec.vqc_depth, spec.qubits, 3})});
        params.push_back({"head.w", Array({spec.n_classes, m})});
        params.push_back({"head.b", Array({spec.n_classes})});
    }
    return params;
}

} // namespace

Model Model::build(const ArchitectureSpec& spec, std::uint64_t seed) {
    spec.validate();
    Model model;
    model.spec = spec;
    model.params = parameter_skeleton(spec);
    Rng rng(seed);
    for (NamedParam& p : model.params) {
        if (p.name == "vqc.angles") {
            for (std::size_t i = 0; i < p.value.size(); ++i) {
                p.value[i] = rng.uniform(-std::numbers::pi, std::numbers::pi);
            }
        } else if (p.name.ends_with(".w")) {
            const Shape& s = p.value.shape();
            const std::size_t fan_in =
                s.size() == 4 ? s[1] * s[2] * s[3] : s[1];
            nn::kaiming_uniform_fill(p.value, fan_in, rng);
        }
        // biases stay zero
    }
    return model;
}

Array& Model::param(const std::string& name) {
    for (NamedParam& p : params) {
        if (p.name == name) return p.value;
    }
    throw std::invalid_argument("Model: no parameter named " + name);
}

const Array& Model::param(const std::string& name) const {
    for (const NamedParam& p : params) {
        if (p.name == name) return p.value;
    }
    throw std::invalid_argument("Model: no parameter named " + name);
}

std::size_t Model::scalar_count() const {
    std::size_t n = 0;
    for (const NamedParam& p : params) {
        n += p.value.size();
    }
    return n;
}

std::size_t Model::quantum_scalar_count() const {
    for (const NamedParam& p : params) {
        if (p.name == "vqc.angles") return p.value.size();
    }
    return 0;
}

ad::Node forward(ad::Tape& tape, const Model& model, ad::Node input, bool training,
                 Rng* dropout_rng, std::vector<ad::Node>* param_leaves) {
    const ArchitectureSpec& spec = model.spec;
    const Shape& xs = input.shape();
    const Shape expected{xs.empty() ? 0 : xs[0], 2, spec.input_bins, spec.input_frames};
    if (xs.size() != 4 || xs != expected) {
        throw std::invalid_argument("forward: input must be [B, 2, " +
                                    std::to_string(spec.input_bins) + ", " +
                                    std::to_string(spec.input_frames) + "], got " +
                                    shape_string(xs));
    }
    const bool hqnn = spec.kind == Kind::hqnn;
    const bool use_dropout = hqnn && training && spec.dropout_p > 0.0;
    if (use_dropout && dropout_rng == nullptr) {
        throw std::invalid_argument("forward: training an HQNN requires a dropout rng");
    }

    std::vector<ad::Node> leaves;
    leaves.reserve(model.params.size());
    for (const NamedParam& p : model.params) {
        leaves.push_back(tape.leaf(&p.value, true));
    }
    if (param_leaves != nullptr) {
        *param_leaves = leaves;
    }
    std::size_t next = 0;
    auto take = [&]() { return leaves[next++]; };

    ad::Node h = input;
    // conv1 + IN + LReLU
    {
        ad::Node w = take(), b = take();
        h = nn::leaky_relu(tape, nn::instance_norm(tape, nn::conv2d(tape, h, w, b, 1, 1)));
    }
    // conv2 + IN + LReLU, pool
    {
        ad::Node w = take(), b = take();
        h = nn::leaky_relu(tape, nn::instance_norm(tape, nn::conv2d(tape, h, w, b, 1, 1)));
        h = nn::max_pool2d(tape, h);
        if (use_dropout) {
            h = nn::dropout(tape, h, spec.dropout_p, true, *dropout_rng);
        }
    }
    // conv3 + IN + LReLU, pool
    {
        ad::Node w = take(), b = take();
        h = nn::leaky_relu(tape, nn::instance_norm(tape, nn::conv2d(tape, h, w, b, 1, 1)));
        h = nn::max_pool2d(tape, h);
        if (use_dropout) {
            h = nn::dropout(tape, h, spec.dropout_p, true, *dropout_rng);
        }
    }
    h = nn::flatten(tape, h);
    // fc1 + LReLU
    {
        ad::Node w = take(), b = take();
        h = nn::leaky_relu(tape, nn::dense(tape, h, w, b));
    }
    // fc2 + LReLU
    {
        ad::Node w = take(), b = take();
        h = nn::leaky_relu(tape, nn::dense(tape, h, w, b));
    }
    if (hqnn) {
        ad::Node angles = take();
        h = qc::quantum_dense(tape, h, angles, spec.vqc_config());
        h = nn::leaky_relu(tape, h);
    }
    // head
    {
        ad::Node w = take(), b = take();
        h = nn::dense(tape, h, w, b);
    }
    return h;
}

Array forward_logits(const Model& model, const Array& batch) {
    ad::Tape tape;
    ad::Node input = tape.leaf(&batch, false);
    ad::Node logits = forward(tape, model, input, false);
    return logits.value();
}

Array probabilities(const Model& model, const Array& batch) {
    return nn::softmax(forward_logits(model, batch));
}

std::vector<int> predict(const Model& model, const Array& batch) {
    const Array logits = forward_logits(model, batch);
    const std::size_t batch_n = logits.dim(0);
    const std::size_t k = logits.dim(1);
    std::vector<int> out(batch_n);
    for (std::size_t bi = 0; bi < batch_n; ++bi) {
        const double* row = logits.data() + bi * k;
        std::size_t best = 0;
        for (std::size_t j = 1; j < k; ++j) {
            if (row[j] > row[best]) {
                best = j;
            }
        }
        out[bi] = static_cast<int>(best);
    }
    return out;
}

void save_checkpoint(const Model& model, const std::string& path) {
    json header;
    header["architecture"] = json::parse(model.spec.to_json());
    header["standardization"] = {{"mean", model.standardization.mean},
                                 {"std", model.standardization.stddev}};
    io::ByteWriter w;
    w.raw("MDQW", 4);
    w.u32(kCheckpointVersion);
    w.str(header.dump());
    w.u32(static_cast<std::uint32_t>(model.params.size()));
    for (const NamedParam& p : model.params) {
        w.str(p.name);
        w.u32(static_cast<std::uint32_t>(p.value.rank()));
        for (std::size_t d : p.value.shape()) {
            w.u64(d);
        }
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            w.f64(p.value[i]);
        }
    }
    w.append_crc();
    io::write_file(path, w.bytes());
}

Model load_checkpoint(const std::string& path) {
    const std::vector<std::uint8_t> bytes = io::read_file(path);
    io::ByteReader r(bytes);
    char magic[4];
    r.raw(magic, 4);
    if (std::string(magic, 4) != "MDQW") {
        throw io_error(path + ": not a checkpoint file (bad magic)");
    }
    const std::uint32_t version = r.u32();
    if (version != kCheckpointVersion) {
        throw version_error(path + ": checkpoint version " + std::to_string(version) +
                            " unsupported (expected " + std::to_string(kCheckpointVersion) + ")");
    }
    Model model;
    try {
        const json header = json::parse(r.str());
        model.spec = ArchitectureSpec::from_json(header.at("architecture").dump());
        model.standardization.mean = header.at("standardization").at("mean").get<std::array<double, 2>>();
        model.standardization.stddev = header.at("standardization").at("std").get<std::array<double, 2>>();
    } catch (const json::exception& e) {
        throw io_error(path + ": bad checkpoint header: " + e.what());
    }
    model.spec.validate();
    model.params = parameter_skeleton(model.spec);

    const std::uint32_t n_params = r.u32();
    if (n_params != model.params.size()) {
        throw io_error(path + ": checkpoint stores " + std::to_string(n_params) +
                       " parameters but the architecture defines " +
                       std::to_string(model.params.size()));
    }
    for (NamedParam& p : model.params) {
        const std::string name = r.str();
        if (name != p.name) {
            throw io_error(path + ": expected parameter " + p.name + ", found " + name);
        }
        const std::uint32_t rank = r.u32();
        Shape shape(rank);
        for (std::uint32_t d = 0; d < rank; ++d) {
            shape[d] = r.u64();
        }
        if (shape != p.value.shape()) {
            throw io_error(path + ": parameter " + p.name + " has shape " +
                           shape_string(shape) + " but the architecture requires " +
                           shape_string(p.value.shape()));
        }
        for (std::size_t i = 0; i < p.value.size(); ++i) {
            p.value[i] = r.f64();
        }
    }
    if (r.remaining() < 4) {
        throw truncation_error(path + ": payload ends before the checksum");
    }
    if (r.remaining() > 4) {
        throw io_error(path + ": unexpected bytes after the payload");
    }
    io::check_trailing_crc(bytes);
    return model;
}

} // namespace mdq::model
