#include "mdq/mm_signal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "mdq/errors.hpp"
#include "mdq/rng.hpp"

namespace mdq::mm {

namespace {

constexpr double kPi = std::numbers::pi;

void require(bool ok, const std::string& message) {
    if (!ok) {
        throw std::invalid_argument(message);
    }
}

bool finite(double v) {
    return std::isfinite(v);
}

double sign(double v) {
    if (v > 0.0) return 1.0;
    if (v < 0.0) return -1.0;
    return 0.0;
}

} // namespace

std::size_t RadarConfig::sample_count() const {
    return static_cast<std::size_t>(std::llround(prf * duration));
}

void validate(const DroneProfile& profile) {
    require(profile.n_blades >= 1, "DroneProfile: n_blades must be >= 1");
    require(finite(profile.l1) && finite(profile.l2) && finite(profile.f_rot),
            "DroneProfile: non-finite field");
    require(profile.l1 >= 0.0 && profile.l1 < profile.l2,
            "DroneProfile: blade radii must satisfy 0 <= l1 < l2");
    require(profile.f_rot > 0.0, "DroneProfile: f_rot must be positive");
}

void validate(const RadarConfig& radar) {
    require(finite(radar.wavelength) && finite(radar.f_c) && finite(radar.prf) &&
                finite(radar.duration),
            "RadarConfig: non-finite field");
    require(radar.wavelength > 0.0, "RadarConfig: wavelength must be positive");
    require(radar.prf > 0.0, "RadarConfig: prf must be positive");
    require(radar.duration > 0.0, "RadarConfig: duration must be positive");
    require(radar.sample_count() >= 1, "RadarConfig: prf*duration rounds to zero samples");
}

void validate(const TargetGeometry& geom) {
    require(finite(geom.theta) && finite(geom.phi_p) && finite(geom.range_m) &&
                finite(geom.v_rad) && finite(geom.rotor_phase) && finite(geom.amplitude),
            "TargetGeometry: non-finite field");
    require(geom.amplitude > 0.0, "TargetGeometry: amplitude must be positive");
    require(geom.theta > -kPi / 2 && geom.theta < kPi / 2,
            "TargetGeometry: theta must lie in (-pi/2, pi/2)");
}

double sinc(double x) {
    const double ax = std::fabs(x);
    if (ax < 1e-6) {
        const double x2 = x * x;
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
    }
    return std::sin(x) / x;
}

double noise_variance(double snr_db, double amplitude) {
    require(finite(snr_db) && finite(amplitude) && amplitude > 0.0,
            "noise_variance: amplitude must be positive and finite");
    return amplitude * amplitude / std::pow(10.0, snr_db / 10.0);
}

ComplexTimeSeries synthesize_mm(const DroneProfile& profile, const RadarConfig& radar,
                                const TargetGeometry& geom, bool include_carrier) {
    validate(profile);
    validate(radar);
    validate(geom);

    const std::size_t n_samples = radar.sample_count();
    const double four_pi_over_lambda = 4.0 * kPi / radar.wavelength;
    const double abs_theta = std::fabs(geom.theta);
    const double alpha = std::sin(abs_theta + geom.phi_p) + std::sin(abs_theta - geom.phi_p);
    const double beta =
        sign(geom.theta) * (std::sin(abs_theta + geom.phi_p) - std::sin(abs_theta - geom.phi_p));
    const double cos_theta = std::cos(geom.theta);
    const double radius_mid = 0.5 * (profile.l1 + profile.l2);
    const double radius_half_span = 0.5 * (profile.l2 - profile.l1);
    const int n_blades = profile.n_blades;

    ComplexTimeSeries out;
    out.sample_rate = radar.prf;
    out.samples.resize(n_samples);

    for (std::size_t k = 0; k < n_samples; ++k) {
        const double t = static_cast<double>(k) / radar.prf;
        double phase = -four_pi_over_lambda * (geom.range_m + geom.v_rad * t);
        if (include_carrier) {
            phase += 2.0 * kPi * radar.f_c * t;
        }
        std::complex<double> blade_sum{0.0, 0.0};
        for (int n = 0; n < n_blades; ++n) {
            const double omega =
                2.0 * kPi * (profile.f_rot * t + static_cast<double>(n) / n_blades) +
                geom.rotor_phase;
            const double gamma = four_pi_over_lambda * cos_theta * std::sin(omega);
            const double envelope = alpha + beta * std::cos(omega);
            const double blade_phase = -radius_mid * gamma;
            blade_sum += envelope * sinc(radius_half_span * gamma) *
                         std::complex<double>(std::cos(blade_phase), std::sin(blade_phase));
        }
        out.samples[k] =
            geom.amplitude * std::complex<double>(std::cos(phase), std::sin(phase)) * blade_sum;
    }

    for (std::size_t k = 0; k < n_samples; ++k) {
        if (!finite(out.samples[k].real()) || !finite(out.samples[k].imag())) {
            throw numeric_error("synthesize_mm: non-finite sample at index " + std::to_string(k));
        }
    }
    return out;
}

ComplexTimeSeries add_awgn(const ComplexTimeSeries& ts, double snr_db, double amplitude,
                           std::uint64_t rng_seed) {
    const double sigma2 = noise_variance(snr_db, amplitude);
    const double component_sigma = std::sqrt(sigma2 / 2.0);
    Rng rng(rng_seed);
    ComplexTimeSeries out;
    out.sample_rate = ts.sample_rate;
    out.samples.resize(ts.samples.size());
    for (std::size_t k = 0; k < ts.samples.size(); ++k) {
        const double re = rng.gaussian() * component_sigma;
        const double im = rng.gaussian() * component_sigma;
        out.samples[k] = ts.samples[k] + std::complex<double>(re, im);
    }
    return out;
}

ComplexTimeSeries noise_only(std::size_t length, double sigma2, double sample_rate,
                             std::uint64_t rng_seed) {
    require(length > 0, "noise_only: length must be positive");
    require(finite(sigma2) && sigma2 > 0.0, "noise_only: sigma2 must be positive");
    const double component_sigma = std::sqrt(sigma2 / 2.0);
    Rng rng(rng_seed);
    ComplexTimeSeries out;
    out.sample_rate = sample_rate;
    out.samples.resize(length);
    for (std::size_t k = 0; k < length; ++k) {
        const double re = rng.gaussian() * component_sigma;
        const double im = rng.gaussian() * component_sigma;
        out.samples[k] = std::complex<double>(re, im);
    }
    return out;
}

double coherent_gain_db(std::size_t n_pulses) {
    require(n_pulses >= 1, "coherent_gain_db: n_pulses must be >= 1");
    return 10.0 * std::log10(static_cast<double>(n_pulses));
}

} // namespace mdq::mm
