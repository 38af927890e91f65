#pragma once

#include <string>
#include <vector>

namespace fpkit {

enum class ImageClass { real, synthetic };

struct Label {
    ImageClass cls = ImageClass::real;
    std::string generator = "none"; // "none" for real images
};

struct ManifestEntry {
    std::string path; // relative to manifest root
    Label label;
};

// Entry order is significant: it anchors residual averaging and per-item
// RNG derivation.
struct DatasetManifest {
    std::string root;
    std::vector<ManifestEntry> entries;

    std::string resolve(const ManifestEntry& e) const {
        if (root.empty()) return e.path;
        return root + "/" + e.path;
    }
};

struct ScoreRecord {
    std::string path;
    double score = 0.0; // higher = more likely synthetic, toolkit-wide
};

struct ScoreSet {
    std::string detector_name;
    std::vector<ScoreRecord> records;
};

// CSV header: path,class,generator
DatasetManifest load_manifest(const std::string& path);
void save_manifest(const DatasetManifest& m, const std::string& path);

// CSV header: path,score
ScoreSet load_scores(const std::string& path);
void save_scores(const ScoreSet& s, const std::string& path);

} // namespace fpkit
