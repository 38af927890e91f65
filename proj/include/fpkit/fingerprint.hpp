#pragma once

#include <string>
#include <vector>

#include "fpkit/image.hpp"
#include "fpkit/manifest.hpp"
#include "fpkit/residual.hpp"

namespace fpkit {

// Running sum of residuals; the fingerprint estimate is sum/count.
// Accumulation is a sequential fold in manifest order so the floating-point
// sum is bit-reproducible.
struct FingerprintEstimate {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> sum;
    int count = 0;

    bool empty() const { return count == 0; }
    std::vector<double> estimate() const;
};

void accumulate(FingerprintEstimate& acc, const NoiseResidual& residual);

FingerprintEstimate estimate_fingerprint(const DatasetManifest& manifest,
                                         const DenoiserConfig& denoiser, int crop);

enum class SpectrumScale { linear, log1p };

// DC-centered magnitude spectrum of the channel-averaged, mean-subtracted
// fingerprint. Bin (i,j) corresponds to frequency offset
// (u,v) = (i - height/2, j - width/2) from DC.
struct AmplitudeSpectrum {
    int height = 0;
    int width = 0;
    SpectrumScale scale = SpectrumScale::linear;
    std::vector<double> values;

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * width + j]; }
};

AmplitudeSpectrum amplitude_spectrum(const FingerprintEstimate& f, SpectrumScale scale);

struct SpectralPeak {
    int u = 0; // row-frequency offset from DC
    int v = 0; // column-frequency offset from DC
    double magnitude = 0.0;
    double prominence = 0.0; // magnitude / local median
};

// A bin is a peak iff it is the strict maximum of its neighborhood window,
// lies outside the 3x3 DC exclusion zone, and its magnitude divided by the
// neighborhood median reaches the threshold. Sorted by prominence, descending.
std::vector<SpectralPeak> detect_peaks(const AmplitudeSpectrum& s,
                                       double prominence_threshold, int neighborhood);

// Grayscale PNG, min-max normalized; a constant spectrum renders as black.
void render_spectrum(const AmplitudeSpectrum& s, const std::string& path);

void save_peaks_csv(const std::vector<SpectralPeak>& peaks, const std::string& path);

} // namespace fpkit
