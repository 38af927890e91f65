#include "fpkit/launder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <stdexcept>

#include "fpkit/image_io.hpp"
#include "fpkit/parallel.hpp"

namespace fpkit {

void LaunderParams::validate() const {
    if (qf_min < 1 || qf_min > qf_max || qf_max > 100)
        throw std::invalid_argument("need 1 <= qf_min <= qf_max <= 100");
    if (min_crop_frac <= 0.0 || min_crop_frac > 1.0)
        throw std::invalid_argument("min_crop_frac must be in (0,1]");
    if (target_side < 16) throw std::invalid_argument("target_side must be >= 16");
}

LaunderResult launder_image(const ImageBuffer& image, SeededRng rng, const LaunderParams& p) {
    p.validate();
    if (image.height < 16 || image.width < 16)
        throw std::runtime_error("image smaller than 16x16");
    const int m = std::min(image.height, image.width);
    // Crop side uniform over [min_crop_frac*m, m], never below the target
    // side unless the image itself is smaller (then upscaled on resize).
    int lo = static_cast<int>(std::ceil(p.min_crop_frac * m));
    lo = std::max(lo, std::min(p.target_side, m));
    const int hi = m;
    const int side = static_cast<int>(rng.uniform_int(lo, hi));
    const int x = static_cast<int>(rng.uniform_int(0, image.width - side));
    const int y = static_cast<int>(rng.uniform_int(0, image.height - side));
    const int qf = static_cast<int>(rng.uniform_int(p.qf_min, p.qf_max));

    ImageBuffer crop(side, side, image.channels);
    for (int yy = 0; yy < side; ++yy)
        for (int xx = 0; xx < side; ++xx)
            for (int c = 0; c < image.channels; ++c)
                crop.at(yy, xx, c) = image.at(y + yy, x + xx, c);

    const ImageBuffer resized = resize_bilinear(crop, p.target_side, p.target_side);

    LaunderResult res;
    res.jpeg = encode_jpeg(resized, qf);
    res.image = decode_jpeg(res.jpeg);
    res.record.crop_x = x;
    res.record.crop_y = y;
    res.record.crop_side = side;
    res.record.qf = qf;
    return res;
}

namespace {

std::string output_name(std::size_t index, const std::string& source_path) {
    const std::string stem = std::filesystem::path(source_path).stem().string();
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%06zu", index);
    return std::string(buf) + "_" + stem + ".jpg";
}

} // namespace

LaunderOutput launder_manifest(const DatasetManifest& m, const LaunderParams& p,
                               const std::string& out_dir, int threads) {
    p.validate();
    std::filesystem::create_directories(out_dir);
    LaunderOutput out;
    out.manifest.root = out_dir;
    out.manifest.entries.resize(m.entries.size());
    out.records.resize(m.entries.size());
    std::vector<char> ok(m.entries.size(), 0);
    std::mutex fail_mutex;

    parallel_for(m.entries.size(), threads, [&](std::size_t i) {
        const auto& entry = m.entries[i];
        try {
            ImageBuffer img = load_image(m.resolve(entry));
            LaunderResult r = launder_image(img, derive_item_rng(p.global_seed, i), p);
            const std::string name = output_name(i, entry.path);
            write_bytes(r.jpeg, out_dir + "/" + name);
            r.record.source_path = entry.path;
            r.record.output_path = name;
            out.records[i] = std::move(r.record);
            out.manifest.entries[i] = {name, entry.label};
            ok[i] = 1;
        } catch (const std::exception& e) {
            std::lock_guard<std::mutex> lock(fail_mutex);
            out.failures.push_back({i, entry.path, e.what()});
        }
    });

    // Compact out failed entries, preserving manifest order.
    if (!out.failures.empty()) {
        DatasetManifest kept;
        kept.root = out.manifest.root;
        std::vector<LaunderRecord> kept_records;
        for (std::size_t i = 0; i < m.entries.size(); ++i)
            if (ok[i]) {
                kept.entries.push_back(std::move(out.manifest.entries[i]));
                kept_records.push_back(std::move(out.records[i]));
            }
        out.manifest = std::move(kept);
        out.records = std::move(kept_records);
        std::sort(out.failures.begin(), out.failures.end(),
                  [](const LaunderFailure& a, const LaunderFailure& b) { return a.index < b.index; });
    }
    return out;
}

void save_records_csv(const std::vector<LaunderRecord>& records, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write records CSV: " + path);
    out << "path,crop_x,crop_y,crop_side,qf,output_path\n";
    for (const auto& r : records)
        out << r.source_path << ',' << r.crop_x << ',' << r.crop_y << ','
            << r.crop_side << ',' << r.qf << ',' << r.output_path << '\n';
}

} // namespace fpkit
