#include "fpkit/manifest.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace fpkit {

namespace {

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

[[noreturn]] void fail(const std::string& path, int line_no, const std::string& what) {
    throw std::runtime_error(path + ":" + std::to_string(line_no) + ": " + what);
}

} // namespace

DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open manifest: " + path);
    DatasetManifest m;
    m.root = std::filesystem::path(path).parent_path().string();
    std::string line;
    int line_no = 0;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1) {
            if (line != "path,class,generator")
                fail(path, line_no, "expected header 'path,class,generator'");
            continue;
        }
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 3) fail(path, line_no, "expected 3 fields, got " + std::to_string(f.size()));
        ManifestEntry e;
        e.path = f[0];
        if (e.path.empty()) fail(path, line_no, "empty path");
        if (!seen.insert(e.path).second) fail(path, line_no, "duplicate path: " + e.path);
        if (f[1] == "real") {
            e.label.cls = ImageClass::real;
            e.label.generator = "none";
            if (f[2] != "none" && !f[2].empty())
                fail(path, line_no, "real entry must have generator 'none'");
        } else if (f[1] == "synthetic") {
            e.label.cls = ImageClass::synthetic;
            e.label.generator = f[2];
            if (e.label.generator.empty())
                fail(path, line_no, "synthetic entry needs a generator name");
        } else {
            fail(path, line_no, "unknown class token '" + f[1] + "'");
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

void save_manifest(const DatasetManifest& m, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write manifest: " + path);
    out << "path,class,generator\n";
    for (const auto& e : m.entries)
        out << e.path << ','
            << (e.label.cls == ImageClass::real ? "real" : "synthetic") << ','
            << e.label.generator << '\n';
}

ScoreSet load_scores(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open score file: " + path);
    ScoreSet s;
    s.detector_name = std::filesystem::path(path).stem().string();
    std::string line;
    int line_no = 0;
    std::unordered_set<std::string> seen;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (line_no == 1) {
            if (line != "path,score")
                fail(path, line_no, "expected header 'path,score'");
            continue;
        }
        if (line.empty()) continue;
        auto f = split_csv(line);
        if (f.size() != 2) fail(path, line_no, "expected 2 fields");
        if (f[0].empty()) fail(path, line_no, "empty path");
        if (!seen.insert(f[0]).second) fail(path, line_no, "duplicate path: " + f[0]);
        double v = 0.0;
        auto res = std::from_chars(f[1].data(), f[1].data() + f[1].size(), v);
        if (res.ec != std::errc{} || res.ptr != f[1].data() + f[1].size())
            fail(path, line_no, "non-numeric score '" + f[1] + "'");
        if (!std::isfinite(v)) fail(path, line_no, "non-finite score");
        s.records.push_back({f[0], v});
    }
    return s;
}

void save_scores(const ScoreSet& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write score file: " + path);
    out << "path,score\n";
    out.precision(17);
    for (const auto& r : s.records) out << r.path << ',' << r.score << '\n';
}

} // namespace fpkit
