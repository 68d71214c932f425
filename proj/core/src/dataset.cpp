#include "mdq/dataset.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "mdq/errors.hpp"
#include "mdq/parallel.hpp"
#include "mdq/serial_io.hpp"

namespace mdq::data {

namespace {

using nlohmann::json;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

json radar_to_json(const mm::RadarConfig& radar) {
    return json{{"wavelength", radar.wavelength},
                {"f_c", radar.f_c},
                {"prf", radar.prf},
                {"duration", radar.duration}};
}

mm::RadarConfig radar_from_json(const json& j) {
    mm::RadarConfig radar;
    radar.wavelength = j.at("wavelength").get<double>();
    radar.f_c = j.at("f_c").get<double>();
    radar.prf = j.at("prf").get<double>();
    radar.duration = j.at("duration").get<double>();
    return radar;
}

bool radar_equal(const mm::RadarConfig& a, const mm::RadarConfig& b) {
    return a.wavelength == b.wavelength && a.f_c == b.f_c && a.prf == b.prf &&
           a.duration == b.duration;
}

} // namespace

const char* task_name(Task task) {
    return task == Task::detection ? "detection" : "classification";
}

Task parse_task(const std::string& name) {
    if (name == "detection") return Task::detection;
    if (name == "classification") return Task::classification;
    throw std::invalid_argument("unknown task \"" + name +
                                "\" (expected detection or classification)");
}

std::vector<mm::DroneProfile> builtin_profiles() {
    return {
        {"DJI Mavic Air 2", 2, 0.005, 0.070, 91.66},
        {"DJI Mavic Mini 2", 2, 0.005, 0.035, 160.0},
        {"DJI Matrice 300 RTK", 2, 0.050, 0.2665, 70.0},
        {"DJI Phantom 4", 2, 0.006, 0.050, 116.0},
        {"Parrot Disco", 2, 0.010, 0.104, 40.0},
    };
}

std::vector<std::string> class_names(Task task) {
    if (task == Task::detection) {
        return {"noise", "drone"};
    }
    return {"DJI Matrice 300 RTK", "DJI Mavic Air 2", "DJI Mavic Mini", "DJI Phantom 4",
            "Parrot Disco"};
}

std::size_t classification_profile_index(std::size_t label) {
    // Classification labels order the drones differently than the
    // builtin profile list.
    static constexpr std::size_t map[5] = {2, 0, 1, 3, 4};
    if (label >= 5) {
        throw std::invalid_argument("classification label must lie in [0, 5)");
    }
    return map[label];
}

mm::RadarConfig default_radar() {
    return {0.03, 1.0e10, 10000.0, 0.2};
}

void GeometrySampler::validate() const {
    require(std::isfinite(theta_min) && std::isfinite(theta_max) && theta_min <= theta_max,
            "GeometrySampler: empty theta interval");
    require(theta_min >= 0.05, "GeometrySampler: |theta| must stay >= 0.05 rad away from the null");
    require(theta_max < std::numbers::pi / 2, "GeometrySampler: theta magnitude must stay below pi/2");
    require(phi_p_min <= phi_p_max && std::isfinite(phi_p_min) && std::isfinite(phi_p_max),
            "GeometrySampler: empty phi_p interval");
    require(range_min <= range_max && range_min > 0.0, "GeometrySampler: bad range interval");
    require(v_rad_min <= v_rad_max && std::isfinite(v_rad_min) && std::isfinite(v_rad_max),
            "GeometrySampler: empty v_rad interval");
    require(amplitude > 0.0 && std::isfinite(amplitude),
            "GeometrySampler: amplitude must be positive");
}

mm::TargetGeometry GeometrySampler::sample(Rng& rng) const {
    mm::TargetGeometry geom;
    const double magnitude = rng.uniform(theta_min, theta_max);
    const double sign = rng.uniform() < 0.5 ? 1.0 : -1.0;
    geom.theta = sign * magnitude;
    geom.phi_p = rng.uniform(phi_p_min, phi_p_max);
    geom.range_m = rng.uniform(range_min, range_max);
    geom.v_rad = rng.uniform(v_rad_min, v_rad_max);
    geom.rotor_phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
    geom.amplitude = amplitude;
    return geom;
}

std::size_t DatasetManifest::total() const {
    std::size_t n = 0;
    for (std::size_t c : counts) {
        n += c;
    }
    return n;
}

std::size_t DatasetManifest::n_frames() const {
    const std::size_t len = radar.sample_count();
    if (len < stft.window || stft.hop == 0) {
        return 0;
    }
    return 1 + (len - stft.window) / stft.hop;
}

std::string DatasetManifest::to_json() const {
    json j;
    j["task"] = task_name(task);
    j["snr_db"] = snr_db;
    j["classes"] = classes;
    j["counts"] = counts;
    j["seed"] = seed;
    j["standardization"] = {{"mean", standardization.mean}, {"std", standardization.stddev}};
    j["stft"] = {{"window", stft.window}, {"hop", stft.hop}};
    j["radar"] = radar_to_json(radar);
    j["example_shape"] = {2, n_bins(), n_frames()};
    return j.dump(2);
}

DatasetManifest DatasetManifest::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw io_error(std::string("manifest is not valid JSON: ") + e.what());
    }
    try {
        DatasetManifest m;
        m.task = parse_task(j.at("task").get<std::string>());
        m.snr_db = j.at("snr_db").get<double>();
        m.classes = j.at("classes").get<std::vector<std::string>>();
        m.counts = j.at("counts").get<std::vector<std::size_t>>();
        m.seed = j.at("seed").get<std::uint64_t>();
        const json& st = j.at("standardization");
        m.standardization.mean = st.at("mean").get<std::array<double, 2>>();
        m.standardization.stddev = st.at("std").get<std::array<double, 2>>();
        m.stft.window = j.at("stft").at("window").get<std::size_t>();
        m.stft.hop = j.at("stft").at("hop").get<std::size_t>();
        m.radar = radar_from_json(j.at("radar"));
        return m;
    } catch (const json::exception& e) {
        throw io_error(std::string("manifest is missing fields: ") + e.what());
    }
}

bool DatasetManifest::operator==(const DatasetManifest& other) const {
    return task == other.task && snr_db == other.snr_db && classes == other.classes &&
           counts == other.counts && seed == other.seed &&
           standardization == other.standardization && format_version == other.format_version &&
           stft == other.stft && radar_equal(radar, other.radar);
}

Dataset generate(Task task, double snr_db, const std::vector<std::size_t>& counts,
                 const GeometrySampler& sampler, std::uint64_t seed,
                 const mm::RadarConfig& radar, const StftConfig& stft,
                 const Standardization* preset) {
    sampler.validate();
    mm::validate(radar);
    const std::vector<std::string> classes = class_names(task);
    require(counts.size() == classes.size(),
            "generate: expected one count per class, " + std::to_string(classes.size()) +
                " for " + std::string(task_name(task)));
    for (std::size_t label = 0; label < counts.size(); ++label) {
        require(counts[label] >= 1, "generate: count for class \"" + classes[label] +
                                        "\" must be >= 1");
    }

    const std::vector<mm::DroneProfile> profiles = builtin_profiles();
    const double sigma2 = mm::noise_variance(snr_db, sampler.amplitude);
    const std::size_t series_len = radar.sample_count();

    DatasetManifest manifest;
    manifest.task = task;
    manifest.snr_db = snr_db;
    manifest.classes = classes;
    manifest.counts = counts;
    manifest.seed = seed;
    manifest.stft = stft;
    manifest.radar = radar;

    // Label-major layout; example g owns the derived seed pair (2g, 2g+1).
    std::size_t total = 0;
    for (std::size_t c : counts) {
        total += c;
    }
    std::vector<LabeledExample> examples(total);
    std::vector<std::pair<int, std::size_t>> slots;  // label, index within class
    slots.reserve(total);
    for (std::size_t label = 0; label < counts.size(); ++label) {
        for (std::size_t i = 0; i < counts[label]; ++i) {
            slots.emplace_back(static_cast<int>(label), i);
        }
    }

    parallel::parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
            const auto [label, within] = slots[g];
            const std::uint64_t geometry_seed = derive_seed(seed, 2 * g);
            const std::uint64_t noise_seed = derive_seed(seed, 2 * g + 1);
            mm::ComplexTimeSeries series;
            if (task == Task::detection && label == 0) {
                series = mm::noise_only(series_len, sigma2, radar.prf, noise_seed);
            } else {
                Rng geometry_rng(geometry_seed);
                const mm::TargetGeometry geom = sampler.sample(geometry_rng);
                const std::size_t profile_index =
                    task == Task::detection
                        ? within % profiles.size()
                        : classification_profile_index(static_cast<std::size_t>(label));
                series = mm::synthesize_mm(profiles[profile_index], radar, geom);
                series = mm::add_awgn(series, snr_db, sampler.amplitude, noise_seed);
            }
            examples[g].spectrogram = spec::stft(series, stft.window, stft.hop);
            examples[g].label = label;
        }
    });

    Standardization stats;
    if (preset != nullptr) {
        stats = *preset;
    } else {
        // Plain sequential accumulation keeps the statistics independent
        // of the thread count.
        const std::size_t per_channel = stft.window * examples[0].spectrogram.n_frames;
        for (std::size_t ch = 0; ch < 2; ++ch) {
            double sum = 0.0;
            for (const LabeledExample& ex : examples) {
                const double* v = ex.spectrogram.data.data() + ch * per_channel;
                for (std::size_t i = 0; i < per_channel; ++i) {
                    sum += v[i];
                }
            }
            const double mean = sum / (static_cast<double>(per_channel) * total);
            double sq = 0.0;
            for (const LabeledExample& ex : examples) {
                const double* v = ex.spectrogram.data.data() + ch * per_channel;
                for (std::size_t i = 0; i < per_channel; ++i) {
                    const double d = v[i] - mean;
                    sq += d * d;
                }
            }
            stats.mean[ch] = mean;
            stats.stddev[ch] = std::sqrt(sq / (static_cast<double>(per_channel) * total));
            if (stats.stddev[ch] < 1e-12) {
                stats.stddev[ch] = 1.0;
            }
        }
    }
    manifest.standardization = stats;

    parallel::parallel_for(total, [&](std::size_t begin, std::size_t end) {
        for (std::size_t g = begin; g < end; ++g) {
            spec::Spectrogram& sg = examples[g].spectrogram;
            const std::size_t per_channel = sg.n_bins * sg.n_frames;
            for (std::size_t ch = 0; ch < 2; ++ch) {
                double* v = sg.data.data() + ch * per_channel;
                for (std::size_t i = 0; i < per_channel; ++i) {
                    // Snap to binary32 so save/load round trips are exact.
                    v[i] = static_cast<double>(
                        static_cast<float>((v[i] - stats.mean[ch]) / stats.stddev[ch]));
                }
            }
        }
    });

    return {std::move(examples), manifest};
}

void save(const std::vector<LabeledExample>& examples, const DatasetManifest& manifest,
          const std::string& path) {
    if (examples.size() != manifest.total()) {
        throw std::invalid_argument("save: manifest counts " + std::to_string(manifest.total()) +
                                    " but " + std::to_string(examples.size()) +
                                    " examples given");
    }
    io::ByteWriter w;
    w.raw("MDQD", 4);
    w.u32(kFormatVersion);
    w.str(manifest.to_json());
    for (const LabeledExample& ex : examples) {
        w.u8(static_cast<std::uint8_t>(ex.label));
        for (double v : ex.spectrogram.data) {
            w.f32(static_cast<float>(v));
        }
    }
    w.append_crc();
    io::write_file(path, w.bytes());
}

Dataset load(const std::string& path) {
    const std::vector<std::uint8_t> bytes = io::read_file(path);
    io::ByteReader r(bytes);

    char magic[4];
    r.raw(magic, 4);
    if (std::string(magic, 4) != "MDQD") {
        throw io_error(path + ": not a dataset file (bad magic)");
    }
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        throw version_error(path + ": format version " + std::to_string(version) +
                            " unsupported (expected " + std::to_string(kFormatVersion) + ")");
    }
    DatasetManifest manifest = DatasetManifest::from_json(r.str());
    manifest.format_version = version;

    const std::size_t total = manifest.total();
    const std::size_t n_bins = manifest.n_bins();
    const std::size_t n_frames = manifest.n_frames();
    const std::size_t values_per_example = 2 * n_bins * n_frames;

    std::vector<LabeledExample> examples(total);
    std::vector<std::size_t> seen(manifest.counts.size(), 0);
    for (std::size_t g = 0; g < total; ++g) {
        LabeledExample& ex = examples[g];
        ex.label = r.u8();
        if (ex.label < 0 || static_cast<std::size_t>(ex.label) >= manifest.counts.size()) {
            throw io_error(path + ": example " + std::to_string(g) + " carries label " +
                           std::to_string(ex.label) + " outside the declared classes");
        }
        seen[static_cast<std::size_t>(ex.label)] += 1;
        spec::Spectrogram& sg = ex.spectrogram;
        sg.n_bins = n_bins;
        sg.n_frames = n_frames;
        sg.sample_rate = manifest.radar.prf;
        sg.hop = manifest.stft.hop;
        sg.data.resize(values_per_example);
        for (std::size_t i = 0; i < values_per_example; ++i) {
            sg.data[i] = static_cast<double>(r.f32());
        }
    }
    if (r.remaining() < 4) {
        throw truncation_error(path + ": payload ends before the checksum");
    }
    if (r.remaining() > 4) {
        throw io_error(path + ": " + std::to_string(r.remaining() - 4) +
                       " unexpected bytes after the payload");
    }
    io::check_trailing_crc(bytes);

    if (seen != manifest.counts) {
        throw io_error(path + ": per-class example counts do not match the manifest");
    }
    return {std::move(examples), manifest};
}

} // namespace mdq::data
