#pragma once

// JSON-lines manifests: one splicing job per line with fields
//   record_id, background, foreground, mask | polygons,
//   x, y, w, h (all four or none), split ("train"|"test"), rational, category.
// Relative asset paths resolve against the manifest's directory.

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "splicegen/image.hpp"
#include "splicegen/placement.hpp"

namespace splicegen::pipeline {

enum class Split { Train, Test };

std::string to_string(Split s);
Split split_from_string(const std::string& s);

struct Point {
    double x = 0.0;
    double y = 0.0;
};
using Polygon = std::vector<Point>;

struct ManifestEntry {
    std::string record_id;
    std::filesystem::path background;
    std::filesystem::path foreground;
    std::optional<std::filesystem::path> mask;
    std::vector<Polygon> polygons;
    std::optional<placement::PlacementSpec> placement;
    Split split = Split::Train;
    bool rational = true;
    std::string category;
};

struct ManifestIngest {
    std::vector<ManifestEntry> entries;  // sorted by record_id
    std::size_t non_rational_dropped = 0;
    std::vector<std::string> warnings;

    std::size_t count(Split s) const;
};

struct IngestOptions {
    bool rational_filter = true;
    bool check_paths = true;
};

// Throws ManifestError naming the line and field on a schema violation or
// duplicate record_id.
ManifestIngest ingest_manifest(const std::filesystem::path& path, const IngestOptions& options = {});
ManifestIngest parse_manifest(const std::string& text, const std::filesystem::path& base_dir,
                              const IngestOptions& options = {});

// Even-odd fill per polygon, union across polygons, pixel (x, y) inside when
// its centre (x + 0.5, y + 0.5) is. Polygons with fewer than 3 vertices are
// skipped and reported through `warnings` when given.
BinaryMask rasterize_polygons(const std::vector<Polygon>& polygons, Dims dims,
                              std::vector<std::string>* warnings = nullptr);

}  // namespace splicegen::pipeline
