#pragma once

// Synthetic splicing jobs on disk: a few backgrounds, a few foreground
// objects with elliptical masks, and a manifest pairing them.

#include <cstdio>
#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "splicegen/image_io.hpp"
#include "support.hpp"

namespace testsupport {

struct FixtureOptions {
    int records = 10;
    int bg_w = 96;
    int bg_h = 72;
    // Every k-th record carries an explicit placement (0 = never).
    int placement_every = 2;
    // Every k-th record uses polygons instead of a mask file (0 = never).
    int polygon_every = 3;
    // Every k-th record is a test record.
    int test_every = 5;
    std::string id_prefix = "rec";
};

inline BinaryMask ellipse_mask(int w, int h) {
    BinaryMask m(w, h);
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0, rx = w * 0.42, ry = h * 0.42;
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double dx = (x - cx) / rx, dy = (y - cy) / ry;
            m.set(x, y, dx * dx + dy * dy <= 1.0);
        }
    return m;
}

inline ImageBuffer object_image(int w, int h, std::uint32_t seed) {
    ImageBuffer img = natural_image(w, h, seed);
    // Push the object's colours away from the backgrounds.
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            img.at(x, y, 0) = 0.15 + 0.5 * img.at(x, y, 0);
            img.at(x, y, 2) = 0.35 + 0.6 * img.at(x, y, 2) * 0.8;
        }
    return img;
}

// Returns the manifest path.
inline std::filesystem::path make_fixture(const std::filesystem::path& dir, const FixtureOptions& o = {}) {
    namespace fs = std::filesystem;
    fs::create_directories(dir / "assets");
    const int n_bg = 3, n_fg = 4;
    for (int b = 0; b < n_bg; ++b)
        splicegen::io::write_png(dir / "assets" / ("bg" + std::to_string(b) + ".png"),
                                 natural_image(o.bg_w + 8 * b, o.bg_h + 4 * b, 100 + b));
    const int fw[n_fg] = {30, 24, 40, 18}, fh[n_fg] = {36, 20, 28, 30};
    for (int f = 0; f < n_fg; ++f) {
        splicegen::io::write_png(dir / "assets" / ("fg" + std::to_string(f) + ".png"),
                                 object_image(fw[f], fh[f], 200 + f));
        splicegen::io::write_mask(dir / "assets" / ("fg" + std::to_string(f) + "_mask.png"),
                                  ellipse_mask(fw[f], fh[f]));
    }
    std::string text;
    for (int i = 0; i < o.records; ++i) {
        const int b = i % n_bg, f = i % n_fg;
        char id[64];
        std::snprintf(id, sizeof id, "%s%04d", o.id_prefix.c_str(), i);
        nlohmann::ordered_json j;
        j["record_id"] = id;
        j["background"] = "assets/bg" + std::to_string(b) + ".png";
        j["foreground"] = "assets/fg" + std::to_string(f) + ".png";
        if (o.polygon_every > 0 && i % o.polygon_every == 1) {
            // Diamond inscribed in the object box, COCO flat form.
            const double w = fw[f], h = fh[f];
            j["polygons"] = nlohmann::ordered_json::array(
                {nlohmann::ordered_json::array({w / 2, 1.0, w - 1.0, h / 2, w / 2, h - 1.0, 1.0, h / 2})});
        } else {
            j["mask"] = "assets/fg" + std::to_string(f) + "_mask.png";
        }
        if (o.placement_every > 0 && i % o.placement_every == 0) {
            j["x"] = 5 + (i * 7) % 20;
            j["y"] = 4 + (i * 5) % 16;
            j["w"] = fw[f];
            j["h"] = fh[f];
        }
        j["split"] = (o.test_every > 0 && i % o.test_every == 0) ? "test" : "train";
        j["rational"] = true;
        j["category"] = "cat" + std::to_string(f);
        text += j.dump() + "\n";
    }
    write_file(dir / "manifest.jsonl", text);
    return dir / "manifest.jsonl";
}

}  // namespace testsupport
