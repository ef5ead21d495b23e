#include "splicegen/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "splicegen/error.hpp"

namespace splicegen::pipeline {

DatasetStats& DatasetStats::operator+=(const DatasetStats& other) {
    for (int k = 0; k < kHistogramBins; ++k) histogram[k] += other.histogram[k];
    total += other.total;
    train += other.train;
    test += other.test;
    return *this;
}

int histogram_bin(double ratio) {
    if (!(ratio >= 0.0 && ratio <= 1.0)) throw InvalidInputError("area ratio outside [0,1]");
    // Start from the arithmetic guess and settle against the exact edges so
    // values sitting on an edge always go to the lower bin.
    int k = static_cast<int>(std::ceil(ratio * kHistogramBins)) - 1;
    k = std::clamp(k, 0, kHistogramBins - 1);
    while (k > 0 && ratio <= static_cast<double>(k) / kHistogramBins) --k;
    while (k < kHistogramBins - 1 && ratio > static_cast<double>(k + 1) / kHistogramBins) ++k;
    return k;
}

DatasetStats dataset_stats(const std::vector<StatsRecord>& records) {
    DatasetStats s;
    for (const auto& r : records) {
        ++s.histogram[histogram_bin(r.area_ratio)];
        ++s.total;
        ++(r.split == Split::Train ? s.train : s.test);
    }
    return s;
}

nlohmann::ordered_json stats_to_json(const DatasetStats& s) {
    nlohmann::ordered_json j;
    j["total"] = s.total;
    j["splits"] = {{"train", s.train}, {"test", s.test}};
    auto bins = nlohmann::ordered_json::array();
    for (int k = 0; k < kHistogramBins; ++k)
        bins.push_back({{"lo", static_cast<double>(k) / kHistogramBins},
                        {"hi", static_cast<double>(k + 1) / kHistogramBins},
                        {"count", s.histogram[k]}});
    j["area_ratio_histogram"] = bins;
    return j;
}

std::vector<StatsRecord> load_stats_records(const std::filesystem::path& dataset_dir) {
    const auto path = dataset_dir / "metadata.jsonl";
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::vector<StatsRecord> out;
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        try {
            const auto j = nlohmann::json::parse(line);
            out.push_back({j.at("record_id").get<std::string>(),
                           split_from_string(j.at("split").get<std::string>()),
                           j.at("area_ratio").get<double>()});
        } catch (const nlohmann::json::exception& e) {
            throw IoError(path.string() + " line " + std::to_string(n) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace splicegen::pipeline
