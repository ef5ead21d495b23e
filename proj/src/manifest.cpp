#include "splicegen/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace splicegen::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(Split s) { return s == Split::Train ? "train" : "test"; }

Split split_from_string(const std::string& s) {
    if (s == "train") return Split::Train;
    if (s == "test") return Split::Test;
    throw InvalidInputError("split must be 'train' or 'test', got '" + s + "'");
}

std::size_t ManifestIngest::count(Split s) const {
    return static_cast<std::size_t>(
        std::count_if(entries.begin(), entries.end(), [s](const ManifestEntry& e) { return e.split == s; }));
}

namespace {

const std::set<std::string> kFields{"record_id", "background", "foreground", "mask", "polygons", "x",
                                    "y",         "w",          "h",          "split", "rational", "category"};

std::string require_string(const json& j, std::size_t line, const char* field) {
    if (!j.contains(field)) throw ManifestError(line, field, "missing required field");
    if (!j[field].is_string()) throw ManifestError(line, field, "must be a string");
    std::string s = j[field].get<std::string>();
    if (s.empty()) throw ManifestError(line, field, "must not be empty");
    return s;
}

fs::path resolve(const fs::path& base, const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

std::vector<Polygon> parse_polygons(const json& j, std::size_t line) {
    if (!j.is_array()) throw ManifestError(line, "polygons", "must be an array of polygons");
    std::vector<Polygon> out;
    for (const json& poly : j) {
        if (!poly.is_array()) throw ManifestError(line, "polygons", "polygon must be an array");
        Polygon p;
        if (!poly.empty() && poly[0].is_array()) {
            // [[x, y], [x, y], ...]
            for (const json& pt : poly) {
                if (!pt.is_array() || pt.size() != 2 || !pt[0].is_number() || !pt[1].is_number())
                    throw ManifestError(line, "polygons", "point must be [x, y]");
                p.push_back({pt[0].get<double>(), pt[1].get<double>()});
            }
        } else {
            // COCO flat list [x1, y1, x2, y2, ...]
            if (poly.size() % 2 != 0)
                throw ManifestError(line, "polygons", "flat coordinate list has odd length");
            for (std::size_t i = 0; i < poly.size(); i += 2) {
                if (!poly[i].is_number() || !poly[i + 1].is_number())
                    throw ManifestError(line, "polygons", "coordinates must be numbers");
                p.push_back({poly[i].get<double>(), poly[i + 1].get<double>()});
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

ManifestEntry parse_entry(const json& j, std::size_t line, const fs::path& base,
                          const IngestOptions& options) {
    if (!j.is_object()) throw ManifestError(line, "", "entry must be a JSON object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!kFields.count(it.key())) throw ManifestError(line, it.key(), "unknown field");

    ManifestEntry e;
    e.record_id = require_string(j, line, "record_id");
    if (e.record_id.find('/') != std::string::npos || e.record_id.find('\\') != std::string::npos ||
        e.record_id == "." || e.record_id == "..")
        throw ManifestError(line, "record_id", "must not contain path separators");
    e.background = resolve(base, require_string(j, line, "background"));
    e.foreground = resolve(base, require_string(j, line, "foreground"));

    const bool has_mask = j.contains("mask");
    const bool has_poly = j.contains("polygons");
    if (has_mask == has_poly)
        throw ManifestError(line, has_mask ? "mask" : "polygons",
                            "exactly one of 'mask' or 'polygons' is required");
    if (has_mask) e.mask = resolve(base, require_string(j, line, "mask"));
    else e.polygons = parse_polygons(j["polygons"], line);

    const char* geom[4] = {"x", "y", "w", "h"};
    int present = 0;
    for (const char* g : geom) present += j.contains(g) ? 1 : 0;
    if (present != 0 && present != 4)
        throw ManifestError(line, present < 4 ? "x" : "", "x, y, w, h must be given together");
    if (present == 4) {
        std::array<int, 4> v{};
        for (int k = 0; k < 4; ++k) {
            const json& f = j[geom[k]];
            if (!f.is_number_integer()) throw ManifestError(line, geom[k], "must be an integer");
            v[k] = f.get<int>();
        }
        if (v[2] < 1 || v[3] < 1) throw ManifestError(line, v[2] < 1 ? "w" : "h", "must be >= 1");
        if (v[0] < 0 || v[1] < 0) throw ManifestError(line, v[0] < 0 ? "x" : "y", "must be >= 0");
        e.placement = placement::PlacementSpec{v[0], v[1], v[2], v[3]};
    }

    try {
        e.split = split_from_string(require_string(j, line, "split"));
    } catch (const InvalidInputError& err) {
        throw ManifestError(line, "split", err.what());
    }
    if (!j.contains("rational")) throw ManifestError(line, "rational", "missing required field");
    if (!j["rational"].is_boolean()) throw ManifestError(line, "rational", "must be a boolean");
    e.rational = j["rational"].get<bool>();
    if (j.contains("category")) {
        if (!j["category"].is_string()) throw ManifestError(line, "category", "must be a string");
        e.category = j["category"].get<std::string>();
    }

    if (options.check_paths) {
        if (!fs::is_regular_file(e.background)) throw ManifestError(line, "background", "file not found");
        if (!fs::is_regular_file(e.foreground)) throw ManifestError(line, "foreground", "file not found");
        if (e.mask && !fs::is_regular_file(*e.mask)) throw ManifestError(line, "mask", "file not found");
    }
    return e;
}

}  // namespace

ManifestIngest parse_manifest(const std::string& text, const fs::path& base_dir,
                              const IngestOptions& options) {
    ManifestIngest out;
    std::istringstream in(text);
    std::string raw;
    std::size_t line = 0;
    std::set<std::string> seen;
    while (std::getline(in, raw)) {
        ++line;
        if (std::all_of(raw.begin(), raw.end(), [](unsigned char c) { return std::isspace(c); })) continue;
        json j;
        try {
            j = json::parse(raw);
        } catch (const json::exception& e) {
            throw ManifestError(line, "", std::string("invalid JSON: ") + e.what());
        }
        ManifestEntry entry = parse_entry(j, line, base_dir, options);
        if (!seen.insert(entry.record_id).second)
            throw ManifestError(line, "record_id", "duplicate record_id '" + entry.record_id + "'");
        if (options.rational_filter && !entry.rational) {
            ++out.non_rational_dropped;
            continue;
        }
        out.entries.push_back(std::move(entry));
    }
    if (line == 0 || (out.entries.empty() && out.non_rational_dropped == 0))
        out.warnings.push_back("manifest contains no entries");
    std::sort(out.entries.begin(), out.entries.end(),
              [](const ManifestEntry& a, const ManifestEntry& b) { return a.record_id < b.record_id; });
    return out;
}

ManifestIngest ingest_manifest(const fs::path& path, const IngestOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open manifest: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_manifest(buf.str(), path.parent_path(), options);
}

BinaryMask rasterize_polygons(const std::vector<Polygon>& polygons, Dims dims,
                              std::vector<std::string>* warnings) {
    BinaryMask mask(dims.width, dims.height);
    std::vector<double> xs;
    for (std::size_t pi = 0; pi < polygons.size(); ++pi) {
        const Polygon& poly = polygons[pi];
        if (poly.size() < 3) {
            if (warnings) warnings->push_back("polygon " + std::to_string(pi) + " has fewer than 3 vertices; skipped");
            continue;
        }
        for (int y = 0; y < dims.height; ++y) {
            const double yc = y + 0.5;
            xs.clear();
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const Point& a = poly[i];
                const Point& b = poly[(i + 1) % poly.size()];
                // Half-open in y so shared vertices are counted once.
                if ((a.y <= yc && yc < b.y) || (b.y <= yc && yc < a.y))
                    xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
            }
            std::sort(xs.begin(), xs.end());
            for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
                // Pixel centres with xs[k] <= x + 0.5 < xs[k + 1].
                const int x0 = std::max(0, static_cast<int>(std::ceil(xs[k] - 0.5)));
                const int x1 = std::min(dims.width - 1, static_cast<int>(std::ceil(xs[k + 1] - 0.5)) - 1);
                for (int x = x0; x <= x1; ++x) mask.set(x, y);
            }
        }
    }
    return mask;
}

}  // namespace splicegen::pipeline
