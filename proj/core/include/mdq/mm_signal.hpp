#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace mdq::mm {

/// Rotor blade geometry of one drone type.
struct DroneProfile {
    std::string name;
    int n_blades = 0;    // N, blades per rotor
    double l1 = 0.0;     // blade root radius, meters
    double l2 = 0.0;     // blade tip radius, meters
    double f_rot = 0.0;  // rotor rotation frequency, Hz
};

/// Radar sampling parameters. The pulse repetition frequency doubles as
/// the complex sample rate of the slow-time series.
struct RadarConfig {
    double wavelength = 0.0;  // lambda, meters
    double f_c = 0.0;         // carrier frequency, Hz
    double prf = 0.0;         // pulse repetition frequency == sample rate, Hz
    double duration = 0.0;    // time span, seconds

    std::size_t sample_count() const;
};

/// Pose and motion of one target relative to the radar.
struct TargetGeometry {
    double theta = 0.0;        // angle between rotation plane and line of sight, radians
    double phi_p = 0.0;        // blade pitch, radians
    double range_m = 0.0;      // range R, meters
    double v_rad = 0.0;        // radial velocity, m/s
    double rotor_phase = 0.0;  // initial blade phase, radians
    double amplitude = 1.0;    // backscatter amplitude A_r
};

/// Uniformly sampled complex radar return.
struct ComplexTimeSeries {
    std::vector<std::complex<double>> samples;
    double sample_rate = 0.0;  // Hz
};

/// Throw std::invalid_argument when a field is non-finite or violates
/// its documented range.
void validate(const DroneProfile& profile);
void validate(const RadarConfig& radar);
void validate(const TargetGeometry& geom);

/// Unnormalized sinc: sin(x)/x with sinc(0) = 1. The removable
/// singularity is evaluated by series below |x| < 1e-6.
double sinc(double x);

/// Noise power sigma_n^2 for a single-pulse SNR of snr_db at backscatter
/// amplitude A_r: sigma_n^2 = A_r^2 / 10^(snr_db/10).
double noise_variance(double snr_db, double amplitude);

/// Rotating-blade radar return
///
///   psi(t) = A_r exp(j(-(4pi/lambda)(R + V_rad t)))
///            * sum_n (alpha + beta cos Omega_n)
///                    * exp(-j (L1+L2)/2 gamma_n) * sinc((L2-L1)/2 gamma_n)
///
/// with Omega_n = 2pi(f_rot t + n/N) + rotor_phase,
/// gamma_n = (4pi/lambda) cos(theta) sin(Omega_n),
/// alpha = sin(|theta|+phi_p) + sin(|theta|-phi_p),
/// beta = sign(theta) (sin(|theta|+phi_p) - sin(|theta|-phi_p)),
/// sampled at t_k = k/prf for k = 0..round(prf*duration)-1.
///
/// The default output is the demodulated baseband return; sampling at
/// the PRF cannot represent the carrier. include_carrier multiplies the
/// exp(j 2pi f_c t) factor back in for closed-form checks only.
ComplexTimeSeries synthesize_mm(const DroneProfile& profile, const RadarConfig& radar,
                                const TargetGeometry& geom, bool include_carrier = false);

/// ts plus i.i.d. circular complex Gaussian noise calibrated to the
/// amplitude used in synthesis: total noise variance A_r^2/10^(snr_db/10),
/// each component N(0, sigma_n^2/2). Deterministic for a fixed seed.
ComplexTimeSeries add_awgn(const ComplexTimeSeries& ts, double snr_db, double amplitude,
                           std::uint64_t rng_seed);

/// Pure circular complex Gaussian series with total per-sample variance
/// sigma2. sample_rate only labels the series for downstream plumbing.
ComplexTimeSeries noise_only(std::size_t length, double sigma2, double sample_rate,
                             std::uint64_t rng_seed);

/// Integration gain 10*log10(n_pulses) in dB; reporting aid only.
double coherent_gain_db(std::size_t n_pulses);

} // namespace mdq::mm
