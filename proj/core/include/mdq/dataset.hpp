#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mdq/mm_signal.hpp"
#include "mdq/rng.hpp"
#include "mdq/spectrogram.hpp"

namespace mdq::data {

inline constexpr std::uint32_t kFormatVersion = 1;

enum class Task { detection, classification };

const char* task_name(Task task);
Task parse_task(const std::string& name);

/// The five drone profiles, in the fixed builtin order:
/// 0 Mavic Air 2, 1 Mavic Mini 2, 2 Matrice 300 RTK, 3 Phantom 4,
/// 4 Parrot Disco. All values in meters/Hz.
std::vector<mm::DroneProfile> builtin_profiles();

/// Class labels per task. Detection: {0 noise, 1 drone}. Classification:
/// {0 DJI Matrice 300 RTK, 1 DJI Mavic Air 2, 2 DJI Mavic Mini,
/// 3 DJI Phantom 4, 4 Parrot Disco}.
std::vector<std::string> class_names(Task task);

/// Index into builtin_profiles() for a classification label.
std::size_t classification_profile_index(std::size_t label);

/// X-band defaults: 0.03 m wavelength, 10 GHz carrier, 10 kHz PRF,
/// 0.2 s span (2000 samples).
mm::RadarConfig default_radar();

/// Uniform sampling ranges for per-example target geometry. theta is
/// drawn as a magnitude in [theta_min, theta_max] with a random sign;
/// the lower bound keeps samples away from the theta=0 null.
struct GeometrySampler {
    double theta_min = 0.05;  // radians
    double theta_max = 1.3;
    double phi_p_min = 0.087;  // radians, about 5 degrees
    double phi_p_max = 0.26;   // radians, about 15 degrees
    double range_min = 100.0;  // meters
    double range_max = 2000.0;
    double v_rad_min = -10.0;  // m/s
    double v_rad_max = 10.0;
    double amplitude = 1.0;  // A_r, fixed

    void validate() const;
    mm::TargetGeometry sample(Rng& rng) const;

    bool operator==(const GeometrySampler&) const = default;
};

struct StftConfig {
    std::size_t window = 16;
    std::size_t hop = 8;

    bool operator==(const StftConfig&) const = default;
};

/// Per-channel affine transform (x - mean) / stddev fitted on a training
/// split and reused verbatim on evaluation data.
struct Standardization {
    std::array<double, 2> mean{0.0, 0.0};
    std::array<double, 2> stddev{1.0, 1.0};

    bool operator==(const Standardization&) const = default;
};

struct DatasetManifest {
    Task task = Task::detection;
    double snr_db = 0.0;
    std::vector<std::string> classes;  // index == label
    std::vector<std::size_t> counts;   // index == label
    std::uint64_t seed = 0;
    Standardization standardization;
    std::uint32_t format_version = kFormatVersion;
    StftConfig stft;
    mm::RadarConfig radar;

    std::size_t total() const;
    std::size_t n_bins() const { return stft.window; }
    std::size_t n_frames() const;

    std::string to_json() const;
    static DatasetManifest from_json(const std::string& text);

    bool operator==(const DatasetManifest& other) const;
};

struct LabeledExample {
    spec::Spectrogram spectrogram;
    int label = 0;
};

using Dataset = std::pair<std::vector<LabeledExample>, DatasetManifest>;

/// Generates a labeled spectrogram dataset.
///
/// counts[label] examples per class, in label-major order. Example g
/// draws its geometry from Rng(derive_seed(seed, 2g)) and its noise from
/// seed derive_seed(seed, 2g+1), so generation is a pure function of the
/// arguments and is identical for any thread count. Drone examples of
/// the detection task cycle through the builtin profiles; noise examples
/// share the drone classes' noise power sigma_n^2 = A_r^2/10^(snr/10).
/// Values are standardized per channel (statistics of this set, or
/// `preset` when given, e.g. for test sets reusing training statistics)
/// and snapped to binary32 so that a save/load round trip is exact.
Dataset generate(Task task, double snr_db, const std::vector<std::size_t>& counts,
                 const GeometrySampler& sampler, std::uint64_t seed,
                 const mm::RadarConfig& radar = default_radar(), const StftConfig& stft = {},
                 const Standardization* preset = nullptr);

/// Container format, all little-endian: magic "MDQD", u32 format
/// version, u32 manifest byte length, manifest JSON, then per example a
/// u8 label plus binary32 values in [channel][bin][frame] order, and a
/// trailing CRC-32 of every preceding byte.
void save(const std::vector<LabeledExample>& examples, const DatasetManifest& manifest,
          const std::string& path);
Dataset load(const std::string& path);

} // namespace mdq::data
