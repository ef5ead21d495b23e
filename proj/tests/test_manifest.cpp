#include <gtest/gtest.h>

#include "splicegen/manifest.hpp"
#include "support.hpp"

using namespace splicegen;
using namespace splicegen::pipeline;
using testsupport::TempDir;

namespace {

IngestOptions no_paths(bool filter = true) {
    IngestOptions o;
    o.check_paths = false;
    o.rational_filter = filter;
    return o;
}

std::string line(const std::string& id, const char* split = "train", bool rational = true,
                 const std::string& extra = R"("mask": "m.png")") {
    return R"({"record_id": ")" + id + R"(", "background": "b.png", "foreground": "f.png", )" + extra +
           R"(, "split": ")" + split + R"(", "rational": )" + (rational ? "true" : "false") + "}\n";
}

bool inside_polygon(const Polygon& p, double x, double y) {
    bool in = false;
    for (std::size_t i = 0, j = p.size() - 1; i < p.size(); j = i++) {
        if ((p[i].y > y) != (p[j].y > y) &&
            x < (p[j].x - p[i].x) * (y - p[i].y) / (p[j].y - p[i].y) + p[i].x)
            in = !in;
    }
    return in;
}

}  // namespace

TEST(Manifest, FiltersNonRational) {
    const auto m = parse_manifest(line("a") + line("b", "test", false) + line("c"), "/x", no_paths());
    ASSERT_EQ(m.entries.size(), 2u);
    EXPECT_EQ(m.non_rational_dropped, 1u);
    const auto all = parse_manifest(line("a") + line("b", "test", false) + line("c"), "/x", no_paths(false));
    EXPECT_EQ(all.entries.size(), 3u);
}

TEST(Manifest, SortedByRecordIdAndPathsResolved) {
    const auto m = parse_manifest(line("z") + line("a") + line("m"), "/base", no_paths());
    ASSERT_EQ(m.entries.size(), 3u);
    EXPECT_EQ(m.entries[0].record_id, "a");
    EXPECT_EQ(m.entries[2].record_id, "z");
    EXPECT_EQ(m.entries[0].background, std::filesystem::path("/base/b.png"));
}

TEST(Manifest, SplitCountsPreserved) {
    std::string text;
    for (int i = 0; i < 900; ++i) text += line("tr" + std::to_string(i), "train");
    for (int i = 0; i < 150; ++i) text += line("te" + std::to_string(i), "test");
    const auto m = parse_manifest(text, "/x", no_paths());
    EXPECT_EQ(m.count(Split::Train), 900u);
    EXPECT_EQ(m.count(Split::Test), 150u);
}

TEST(Manifest, EmptyFileWarns) {
    const auto m = parse_manifest("", "/x", no_paths());
    EXPECT_TRUE(m.entries.empty());
    EXPECT_FALSE(m.warnings.empty());
}

TEST(Manifest, ErrorsNameLineAndField) {
    try {
        parse_manifest(line("a") + line("b", "val"), "/x", no_paths());
        FAIL();
    } catch (const ManifestError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.field(), "split");
    }
    try {
        parse_manifest(line("a") + line("a"), "/x", no_paths());
        FAIL();
    } catch (const ManifestError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.field(), "record_id");
    }
    auto field_of = [](const std::string& text) {
        try {
            parse_manifest(text, "/x", no_paths());
        } catch (const ManifestError& e) {
            return e.field();
        }
        return std::string("<none>");
    };
    EXPECT_EQ(field_of(line("a", "train", true, R"("mask": "m.png", "colour": 1)")), "colour");
    EXPECT_EQ(field_of(line("a", "train", true, R"("mask": "m.png", "x": 1, "y": 2)")), "x");
    EXPECT_EQ(field_of(line("a", "train", true, R"("mask": "m.png", "x": 1, "y": 2, "w": 0, "h": 3)")), "w");
    EXPECT_EQ(field_of(line("a/b")), "record_id");
    EXPECT_EQ(field_of(line("a", "train", true, R"("polygons": [[0,0,1,1]], "mask": "m.png")")), "mask");
    EXPECT_EQ(field_of(R"({"record_id": "a", "background": "b", "foreground": "f", "mask": "m", "split": "train"})"),
              "rational");
    EXPECT_EQ(field_of("not json\n"), "");
}

TEST(Manifest, PlacementAndPolygonForms) {
    const auto m = parse_manifest(
        line("a", "train", true, R"("polygons": [[1,1, 5,1, 5,5]], "x": 3, "y": 4, "w": 10, "h": 12, "category": "dog")") +
            line("b", "test", true, R"("polygons": [[[1,1],[5,1],[5,5]]])"),
        "/x", no_paths());
    ASSERT_EQ(m.entries.size(), 2u);
    const auto& a = m.entries[0];
    ASSERT_TRUE(a.placement.has_value());
    EXPECT_EQ(*a.placement, (placement::PlacementSpec{3, 4, 10, 12}));
    EXPECT_EQ(a.category, "dog");
    EXPECT_EQ(a.polygons.size(), 1u);
    EXPECT_EQ(a.polygons[0].size(), 3u);
    EXPECT_FALSE(m.entries[1].placement.has_value());
    EXPECT_EQ(m.entries[1].polygons[0].size(), 3u);
}

TEST(Manifest, PathChecksAndFileIngest) {
    TempDir dir;
    testsupport::write_file(dir / "man.jsonl", line("a"));
    EXPECT_THROW(ingest_manifest(dir / "man.jsonl"), ManifestError);
    for (const char* f : {"b.png", "f.png", "m.png"}) testsupport::write_file(dir / f, "");
    const auto m = ingest_manifest(dir / "man.jsonl");
    ASSERT_EQ(m.entries.size(), 1u);
    EXPECT_EQ(m.entries[0].mask.value(), dir / "m.png");
    EXPECT_THROW(ingest_manifest(dir / "none.jsonl"), IoError);
}

TEST(Rasterize, AxisAlignedSquare) {
    const BinaryMask m = rasterize_polygons({{{10, 10}, {20, 10}, {20, 20}, {10, 20}}}, {32, 32});
    EXPECT_EQ(m, testsupport::rect_mask(32, 32, 10, 10, 10, 10));
}

TEST(Rasterize, EmptyAndDegenerate) {
    EXPECT_EQ(rasterize_polygons({}, {8, 8}), BinaryMask(8, 8));
    std::vector<std::string> warnings;
    EXPECT_EQ(rasterize_polygons({{{1, 1}, {5, 5}}}, {8, 8}, &warnings), BinaryMask(8, 8));
    EXPECT_EQ(warnings.size(), 1u);
}

TEST(Rasterize, TriangleMatchesPointInPolygonOracle) {
    const Polygon tri{{0, 0}, {31, 0}, {0, 31}};
    const BinaryMask m = rasterize_polygons({tri}, {32, 32});
    std::size_t oracle = 0;
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            const bool in = inside_polygon(tri, x + 0.5, y + 0.5);
            EXPECT_EQ(m.test(x, y), in) << x << "," << y;
            oracle += in;
        }
    EXPECT_EQ(m.count(), oracle);
    // Centres (x + 0.5, y + 0.5) strictly below the hypotenuse x + y = 31.
    EXPECT_EQ(m.count(), 465u);
}

TEST(Rasterize, UnionAndEvenOdd) {
    // Two overlapping squares: union, not xor.
    const BinaryMask u = rasterize_polygons({{{2, 2}, {8, 2}, {8, 8}, {2, 8}}, {{5, 5}, {12, 5}, {12, 12}, {5, 12}}},
                                            {16, 16});
    EXPECT_TRUE(u.test(6, 6));
    EXPECT_EQ(u.count(), 36u + 49u - 9u);
    // A self-overlapping pentagram leaves its centre empty under even-odd.
    const double cx = 16, cy = 16, r = 14;
    Polygon star;
    for (int k = 0; k < 5; ++k) {
        const double t = -1.5707963 + k * 2.5132741;
        star.push_back({cx + r * std::cos(t), cy + r * std::sin(t)});
    }
    const BinaryMask s = rasterize_polygons({star}, {32, 32});
    EXPECT_FALSE(s.test(16, 16));
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) EXPECT_EQ(s.test(x, y), inside_polygon(star, x + 0.5, y + 0.5));
}

TEST(Rasterize, RandomPolygonsMatchOracle) {
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> d(-3.0, 27.0);
    for (int trial = 0; trial < 20; ++trial) {
        Polygon p;
        const int n = 3 + trial % 6;
        for (int k = 0; k < n; ++k) p.push_back({d(rng), d(rng)});
        const BinaryMask m = rasterize_polygons({p}, {24, 24});
        for (int y = 0; y < 24; ++y)
            for (int x = 0; x < 24; ++x)
                ASSERT_EQ(m.test(x, y), inside_polygon(p, x + 0.5, y + 0.5)) << trial << " " << x << "," << y;
    }
}
