#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "splicegen/manifest.hpp"

namespace splicegen::pipeline {

inline constexpr int kHistogramBins = 20;

struct StatsRecord {
    std::string record_id;
    Split split = Split::Train;
    double area_ratio = 0.0;
};

struct DatasetStats {
    std::array<std::size_t, kHistogramBins> histogram{};
    std::size_t total = 0;
    std::size_t train = 0;
    std::size_t test = 0;

    DatasetStats& operator+=(const DatasetStats& other);
    bool operator==(const DatasetStats&) const = default;
};

// Bin k covers (k/20, (k+1)/20]; a ratio of exactly 0 lands in bin 0.
int histogram_bin(double ratio);

DatasetStats dataset_stats(const std::vector<StatsRecord>& records);

nlohmann::ordered_json stats_to_json(const DatasetStats& s);

// Reads record_id, split and area_ratio from out_dir/metadata.jsonl.
std::vector<StatsRecord> load_stats_records(const std::filesystem::path& dataset_dir);

}  // namespace splicegen::pipeline
