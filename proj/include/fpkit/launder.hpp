#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fpkit/image.hpp"
#include "fpkit/manifest.hpp"
#include "fpkit/rng.hpp"

namespace fpkit {

// Social-network style laundering: random large square crop, bilinear
// resize to target_side, JPEG round-trip at a random quality factor.
struct LaunderParams {
    int target_side = 200;
    int qf_min = 65;
    int qf_max = 100;
    double min_crop_frac = 0.625;
    std::uint64_t global_seed = 0;

    void validate() const;
};

struct LaunderRecord {
    std::string source_path;
    int crop_x = 0;
    int crop_y = 0;
    int crop_side = 0;
    int qf = 0;
    std::string output_path;
};

struct LaunderResult {
    ImageBuffer image;                // decoded post-JPEG pixels
    std::vector<std::uint8_t> jpeg;   // the exact bytes written to disk
    LaunderRecord record;             // paths filled in by the caller
};

// Draw order is fixed (side, x, y, qf) so a given rng stream always maps
// to the same laundering.
LaunderResult launder_image(const ImageBuffer& image, SeededRng rng, const LaunderParams& p);

struct LaunderFailure {
    std::size_t index = 0;
    std::string path;
    std::string message;
};

struct LaunderOutput {
    DatasetManifest manifest; // laundered files, labels preserved
    std::vector<LaunderRecord> records;
    std::vector<LaunderFailure> failures;
};

// Parallel over entries; per-entry rng derived from (global_seed, index)
// so results are independent of thread count. Failures are collected, not
// fatal; successfully laundered files are kept.
LaunderOutput launder_manifest(const DatasetManifest& m, const LaunderParams& p,
                               const std::string& out_dir, int threads = 1);

void save_records_csv(const std::vector<LaunderRecord>& records, const std::string& path);

} // namespace fpkit
