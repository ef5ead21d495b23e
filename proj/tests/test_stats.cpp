#include <gtest/gtest.h>

#include "splicegen/stats.hpp"
#include "support.hpp"

using namespace splicegen;
using namespace splicegen::pipeline;

namespace {

// Bin membership tested against the interval definition directly.
std::array<std::size_t, 20> brute_histogram(const std::vector<StatsRecord>& recs) {
    std::array<std::size_t, 20> h{};
    for (const auto& r : recs) {
        if (r.area_ratio == 0.0) {
            ++h[0];
            continue;
        }
        for (int k = 0; k < 20; ++k) {
            const double lo = k / 20.0, hi = (k + 1) / 20.0;
            if (r.area_ratio > lo && r.area_ratio <= hi) {
                ++h[k];
                break;
            }
        }
    }
    return h;
}

}  // namespace

TEST(Stats, FourRecordExample) {
    const std::vector<StatsRecord> recs{{"a", Split::Train, 0.1}, {"b", Split::Train, 0.1},
                                        {"c", Split::Test, 0.3}, {"d", Split::Train, 0.9}};
    const DatasetStats s = dataset_stats(recs);
    EXPECT_EQ(s.histogram[1], 2u);   // (0.05, 0.10]
    EXPECT_EQ(s.histogram[5], 1u);   // (0.25, 0.30]
    EXPECT_EQ(s.histogram[17], 1u);  // (0.85, 0.90]
    EXPECT_EQ(s.total, 4u);
    EXPECT_EQ(s.train, 3u);
    EXPECT_EQ(s.test, 1u);
    std::size_t sum = 0;
    for (auto c : s.histogram) sum += c;
    EXPECT_EQ(sum, 4u);
}

TEST(Stats, EmptyIsAllZero) {
    const DatasetStats s = dataset_stats({});
    for (auto c : s.histogram) EXPECT_EQ(c, 0u);
    EXPECT_EQ(s.total, 0u);
}

TEST(Stats, EdgesAndRange) {
    EXPECT_EQ(histogram_bin(0.0), 0);
    EXPECT_EQ(histogram_bin(0.05), 0);
    EXPECT_EQ(histogram_bin(std::nextafter(0.05, 1.0)), 1);
    EXPECT_EQ(histogram_bin(1.0), 19);
    for (int k = 1; k <= 20; ++k) EXPECT_EQ(histogram_bin(k / 20.0), k - 1);
    EXPECT_THROW(histogram_bin(1.01), InvalidInputError);
    EXPECT_THROW(histogram_bin(-0.1), InvalidInputError);
}

TEST(Stats, MatchesBruteForceOnRandomRecords) {
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<StatsRecord> recs;
    for (int i = 0; i < 1000; ++i) {
        double r = d(rng);
        if (i % 50 == 0) r = (i / 50 % 21) / 20.0;  // land exactly on edges too
        recs.push_back({std::to_string(i), i % 7 == 0 ? Split::Test : Split::Train, r});
    }
    const DatasetStats s = dataset_stats(recs);
    EXPECT_EQ(s.histogram, brute_histogram(recs));
    EXPECT_EQ(s.total, 1000u);
}

TEST(Stats, ReductionIsOrderIndependent) {
    std::mt19937 rng(6);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<StatsRecord> recs;
    for (int i = 0; i < 300; ++i) recs.push_back({std::to_string(i), i % 3 ? Split::Train : Split::Test, d(rng)});
    DatasetStats parts;
    for (std::size_t start = 0; start < recs.size(); start += 70)
        parts += dataset_stats({recs.begin() + start, recs.begin() + std::min(recs.size(), start + 70)});
    std::shuffle(recs.begin(), recs.end(), rng);
    EXPECT_EQ(parts, dataset_stats(recs));
}

TEST(Stats, JsonShape) {
    const auto j = stats_to_json(dataset_stats({{"a", Split::Test, 0.42}}));
    EXPECT_EQ(j["total"], 1);
    EXPECT_EQ(j["splits"]["test"], 1);
    ASSERT_EQ(j["area_ratio_histogram"].size(), 20u);
    EXPECT_EQ(j["area_ratio_histogram"][8]["count"], 1);
}

TEST(Stats, LoadsMetadata) {
    testsupport::TempDir dir;
    testsupport::write_file(dir / "metadata.jsonl",
                            R"({"record_id": "a", "split": "train", "area_ratio": 0.2})" "\n"
                            R"({"record_id": "b", "split": "test", "area_ratio": 0.7})" "\n");
    const auto recs = load_stats_records(dir.path());
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_EQ(recs[1].split, Split::Test);
    testsupport::write_file(dir / "metadata.jsonl", R"({"record_id": "a"})" "\n");
    EXPECT_THROW(load_stats_records(dir.path()), IoError);
}
