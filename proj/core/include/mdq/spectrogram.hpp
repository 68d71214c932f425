#pragma once

#include <cstddef>
#include <vector>

#include "mdq/mm_signal.hpp"

namespace mdq::spec {

/// Two-channel time-frequency image of a complex series.
///
/// Channel 0 holds Re(STFT), channel 1 holds Im(STFT). Bins use the
/// center-shifted two-sided layout: bin 0 is -sample_rate/2 and
/// frequency grows by sample_rate/n_bins per bin. data is row-major
/// [channel][bin][frame].
struct Spectrogram {
    std::vector<double> data;
    std::size_t n_bins = 0;
    std::size_t n_frames = 0;
    double sample_rate = 0.0;
    std::size_t hop = 0;

    std::size_t size() const { return 2 * n_bins * n_frames; }

    double& at(std::size_t channel, std::size_t bin, std::size_t frame) {
        return data[(channel * n_bins + bin) * n_frames + frame];
    }
    double at(std::size_t channel, std::size_t bin, std::size_t frame) const {
        return data[(channel * n_bins + bin) * n_frames + frame];
    }
};

/// Symmetric Hamming window w[n] = 0.54 - 0.46 cos(2 pi n / (window-1)).
std::vector<double> hamming_window(std::size_t window);

/// Center frequency of each bin in the center-shifted layout, from
/// -sample_rate/2 up in steps of sample_rate/window. window must be even.
std::vector<double> bin_frequencies(std::size_t window, double sample_rate);

/// Short-time Fourier transform with a symmetric Hamming window and an
/// unnormalized DFT. Frame m covers samples [m*hop, m*hop + window); the
/// trailing partial frame is dropped, so
/// n_frames = 1 + floor((len - window)/hop).
Spectrogram stft(const mm::ComplexTimeSeries& ts, std::size_t window, std::size_t hop);

} // namespace mdq::spec
