#include "mdq/spectrogram.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "mdq/parallel.hpp"

namespace mdq::spec {

std::vector<double> hamming_window(std::size_t window) {
    if (window < 2) {
        throw std::invalid_argument("hamming_window: window must be >= 2");
    }
    std::vector<double> w(window);
    for (std::size_t n = 0; n < window; ++n) {
        w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) /
                                      static_cast<double>(window - 1));
    }
    return w;
}

std::vector<double> bin_frequencies(std::size_t window, double sample_rate) {
    if (window < 2 || window % 2 != 0) {
        throw std::invalid_argument("bin_frequencies: window must be even and >= 2");
    }
    std::vector<double> freqs(window);
    const double step = sample_rate / static_cast<double>(window);
    for (std::size_t b = 0; b < window; ++b) {
        freqs[b] = -sample_rate / 2.0 + step * static_cast<double>(b);
    }
    return freqs;
}

Spectrogram stft(const mm::ComplexTimeSeries& ts, std::size_t window, std::size_t hop) {
    const std::size_t len = ts.samples.size();
    if (window < 2 || window % 2 != 0) {
        throw std::invalid_argument("stft: window must be even and >= 2");
    }
    if (window > len) {
        throw std::invalid_argument("stft: window " + std::to_string(window) +
                                    " exceeds signal length " + std::to_string(len));
    }
    if (hop == 0 || hop > window) {
        throw std::invalid_argument("stft: hop must lie in [1, window]");
    }

    const std::size_t n_frames = 1 + (len - window) / hop;
    const std::vector<double> w = hamming_window(window);

    // Twiddle table for the direct size-`window` DFT: e^{-2 pi i k n / window}.
    std::vector<std::complex<double>> twiddle(window * window);
    for (std::size_t k = 0; k < window; ++k) {
        for (std::size_t n = 0; n < window; ++n) {
            const double angle = -2.0 * std::numbers::pi * static_cast<double>(k * n) /
                                 static_cast<double>(window);
            twiddle[k * window + n] = {std::cos(angle), std::sin(angle)};
        }
    }

    Spectrogram out;
    out.n_bins = window;
    out.n_frames = n_frames;
    out.sample_rate = ts.sample_rate;
    out.hop = hop;
    out.data.assign(out.size(), 0.0);

    // Each frame owns one output column, so frames parallelize without
    // changing any result.
    parallel::parallel_for(n_frames, [&](std::size_t begin, std::size_t end) {
        std::vector<std::complex<double>> frame(window);
        for (std::size_t m = begin; m < end; ++m) {
            const std::size_t start = m * hop;
            for (std::size_t n = 0; n < window; ++n) {
                frame[n] = w[n] * ts.samples[start + n];
            }
            for (std::size_t b = 0; b < window; ++b) {
                // Center-shifted layout: output bin b is DFT index
                // (b + window/2) mod window.
                const std::size_t k = (b + window / 2) % window;
                std::complex<double> acc{0.0, 0.0};
                const std::complex<double>* row = &twiddle[k * window];
                for (std::size_t n = 0; n < window; ++n) {
                    acc += row[n] * frame[n];
                }
                out.at(0, b, m) = acc.real();
                out.at(1, b, m) = acc.imag();
            }
        }
    });
    return out;
}

} // namespace mdq::spec
