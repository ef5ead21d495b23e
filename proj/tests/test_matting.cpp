#include <gtest/gtest.h>

#include <algorithm>

#include "splicegen/imaging.hpp"
#include "splicegen/matting.hpp"
#include "support.hpp"

using namespace splicegen;
using namespace splicegen::matting;
using testsupport::brute_dilate;
using testsupport::brute_erode;
using testsupport::max_abs_diff;
using testsupport::rect_mask;

namespace {

MattingParams params(int er, int dr, MattingMethod m = MattingMethod::GuidedFilter) {
    MattingParams p;
    p.erode_radius = er;
    p.dilate_radius = dr;
    p.method = m;
    return p;
}

void expect_known_pixels_exact(const Trimap& t, const AlphaMatte& a) {
    for (std::size_t i = 0; i < t.storage().size(); ++i) {
        if (t.storage()[i] == TrimapLabel::Foreground) EXPECT_EQ(a.storage()[i], 1.0);
        if (t.storage()[i] == TrimapLabel::Background) EXPECT_EQ(a.storage()[i], 0.0);
        EXPECT_GE(a.storage()[i], 0.0);
        EXPECT_LE(a.storage()[i], 1.0);
    }
}

}  // namespace

TEST(Trimap, SquareFixtureMatchesMorphologyOracle) {
    const BinaryMask sq = rect_mask(64, 64, 22, 22, 20, 20);
    const Trimap t = generate_trimap(sq, params(3, 3));
    const BinaryMask fg = brute_erode(sq, 3), grown = brute_dilate(sq, 3);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            const TrimapLabel expect = fg.test(x, y)       ? TrimapLabel::Foreground
                                       : !grown.test(x, y) ? TrimapLabel::Background
                                                           : TrimapLabel::Unknown;
            EXPECT_EQ(t.at(x, y), expect);
        }
    EXPECT_EQ(t.count(TrimapLabel::Foreground), 14u * 14);
    EXPECT_EQ(t.count(TrimapLabel::Unknown), 26u * 26 - 14 * 14);
    EXPECT_EQ(t.count(TrimapLabel::Background), 64u * 64 - 26 * 26);
}

TEST(Trimap, SinglePixelAndEmpty) {
    const Trimap t = generate_trimap(rect_mask(9, 9, 4, 4, 1, 1), params(1, 1));
    EXPECT_EQ(t.count(TrimapLabel::Foreground), 0u);
    EXPECT_EQ(t.count(TrimapLabel::Unknown), 9u);
    for (int y = 3; y <= 5; ++y)
        for (int x = 3; x <= 5; ++x) EXPECT_EQ(t.at(x, y), TrimapLabel::Unknown);

    const Trimap empty = generate_trimap(BinaryMask(8, 8), params(3, 3));
    EXPECT_EQ(empty.count(TrimapLabel::Background), 64u);
    EXPECT_TRUE(is_degenerate(empty));
}

TEST(Trimap, UnknownEmptyIffErodeEqualsDilate) {
    const BinaryMask sq = rect_mask(16, 16, 4, 4, 6, 6);
    EXPECT_EQ(generate_trimap(sq, params(0, 0)).count(TrimapLabel::Unknown), 0u);
    EXPECT_GT(generate_trimap(sq, params(0, 1)).count(TrimapLabel::Unknown), 0u);
    const BinaryMask all(8, 8, true);
    EXPECT_EQ(generate_trimap(all, params(0, 3)).count(TrimapLabel::Unknown), 0u);
}

TEST(Trimap, LargerDilateNeverShrinksUnknownOrForeground) {
    std::mt19937 rng(3);
    BinaryMask m(30, 30);
    for (auto& v : m.storage()) v = rng() % 4 == 0;
    std::size_t prev = 0;
    for (int dr = 0; dr <= 5; ++dr) {
        const Trimap t = generate_trimap(m, params(1, dr));
        const std::size_t n = t.pixel_count() - t.count(TrimapLabel::Background);
        EXPECT_GE(n, prev);
        prev = n;
    }
}

TEST(Trimap, SerializedLevels) {
    const Trimap t = generate_trimap(rect_mask(20, 20, 5, 5, 10, 10), params(2, 2));
    for (auto b : t.to_bytes()) EXPECT_TRUE(b == 0 || b == 128 || b == 255);
    EXPECT_EQ(Trimap::from_bytes(20, 20, t.to_bytes()), t);
}

TEST(RefineAlpha, EmptyUnknownGivesIndicator) {
    const BinaryMask sq = rect_mask(16, 16, 4, 4, 6, 6);
    const Trimap t = generate_trimap(sq, params(0, 0));
    const ImageBuffer img = testsupport::random_image(16, 16, 3, 1);
    for (auto m : {MattingMethod::GuidedFilter, MattingMethod::Feather}) {
        const AlphaMatte a = refine_alpha(img, t, params(0, 0, m));
        EXPECT_EQ(a, AlphaMatte::from_mask(sq));
    }
}

TEST(RefineAlpha, KnownPixelsExactAndRangeOnRandomImages) {
    for (std::uint32_t s = 0; s < 4; ++s) {
        const ImageBuffer img = testsupport::random_image(40, 32, 3, s);
        const Trimap t = generate_trimap(rect_mask(40, 32, 8 + s, 6, 18, 14), params(3, 3));
        for (auto m : {MattingMethod::GuidedFilter, MattingMethod::Feather})
            expect_known_pixels_exact(t, refine_alpha(img, t, params(3, 3, m)));
    }
}

TEST(RefineAlpha, DegenerateTrimapGivesZeroMatte) {
    const Trimap t(10, 10, TrimapLabel::Background);
    const AlphaMatte a = refine_alpha(ImageBuffer(10, 10, 3, 0.5), t, params(3, 3));
    EXPECT_EQ(a, AlphaMatte(10, 10, 0.0));
}

TEST(RefineAlpha, ExternalIsNotInProcess) {
    const Trimap t(4, 4, TrimapLabel::Background);
    EXPECT_THROW(refine_alpha(ImageBuffer(4, 4, 3), t, params(1, 1, MattingMethod::External)),
                 InvalidInputError);
}

TEST(RefineAlpha, DimensionMismatch) {
    const Trimap t(4, 4, TrimapLabel::Background);
    EXPECT_THROW(refine_alpha(ImageBuffer(5, 4, 3), t, params(1, 1)), InvalidInputError);
}

// On a constant guide the window covariance vanishes, so a = 0 and the
// output is the box mean of the box mean of the trimap input (0, 0.5, 1).
TEST(GuidedFilter, ConstantGuideIsDoubleBoxMeanOfTrimap) {
    const int w = 40, h = 12, r = 3;
    Trimap t(w, h, TrimapLabel::Background);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            if (x >= 24) t.at(x, y) = TrimapLabel::Foreground;
            else if (x >= 16) t.at(x, y) = TrimapLabel::Unknown;
        }
    const ImageBuffer guide(w, h, 3, 0.4);
    const AlphaMatte a = guided_filter_alpha(guide, t, r, 1e-4);

    std::vector<double> p(static_cast<std::size_t>(w) * h);
    for (std::size_t i = 0; i < p.size(); ++i)
        p[i] = t.storage()[i] == TrimapLabel::Foreground ? 1.0
               : t.storage()[i] == TrimapLabel::Unknown  ? 0.5
                                                         : 0.0;
    auto box = [&](const std::vector<double>& src) {
        std::vector<double> out(src.size());
        for (int y = 0; y < h; ++y)
            for (int x = 0; x < w; ++x) {
                double s = 0.0;
                int n = 0;
                for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy)
                    for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) {
                        s += src[yy * w + xx];
                        ++n;
                    }
                out[y * w + x] = s / n;
            }
        return out;
    };
    const auto expect = box(box(p));
    for (int y = 0; y < h; ++y) {
        double prev = -1.0;
        for (int x = 16; x < 24; ++x) {
            const double v = a.at(x, y);
            EXPECT_NEAR(v, expect[y * w + x], 1e-9);
            EXPECT_GT(v, 0.0);
            EXPECT_LT(v, 1.0);
            EXPECT_GT(v, prev);  // monotone across the straight band
            prev = v;
        }
        EXPECT_EQ(a.at(10, y), 0.0);
        EXPECT_EQ(a.at(30, y), 1.0);
    }
}

namespace {

// Direct single-channel guided filter over truncated windows.
std::vector<double> brute_guided(const std::vector<double>& I, const std::vector<double>& p, int w, int h,
                                 int r, double eps) {
    auto window_mean = [&](const std::vector<double>& f, int x, int y) {
        double s = 0.0;
        int n = 0;
        for (int yy = std::max(0, y - r); yy <= std::min(h - 1, y + r); ++yy)
            for (int xx = std::max(0, x - r); xx <= std::min(w - 1, x + r); ++xx) {
                s += f[yy * w + xx];
                ++n;
            }
        return s / n;
    };
    std::vector<double> a(I.size()), b(I.size()), ii(I.size()), ip(I.size());
    for (std::size_t i = 0; i < I.size(); ++i) {
        ii[i] = I[i] * I[i];
        ip[i] = I[i] * p[i];
    }
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const double mi = window_mean(I, x, y), mp = window_mean(p, x, y);
            const double var = window_mean(ii, x, y) - mi * mi, cov = window_mean(ip, x, y) - mi * mp;
            a[y * w + x] = cov / (var + eps);
            b[y * w + x] = mp - a[y * w + x] * mi;
        }
    std::vector<double> q(I.size());
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            q[y * w + x] = window_mean(a, x, y) * I[y * w + x] + window_mean(b, x, y);
    return q;
}

struct EdgeFixture {
    int w = 48, h = 16;
    std::vector<double> grey;
    Trimap trimap;
    std::vector<double> input;
};

// Dark left half, bright right half, unknown band straddling the edge.
EdgeFixture edge_fixture() {
    EdgeFixture f;
    f.trimap = Trimap(f.w, f.h, TrimapLabel::Background);
    f.grey.resize(static_cast<std::size_t>(f.w) * f.h);
    f.input.resize(f.grey.size());
    for (int y = 0; y < f.h; ++y)
        for (int x = 0; x < f.w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * f.w + x;
            f.grey[i] = x >= 24 ? 0.9 : 0.1 + 0.01 * ((x * 7 + y * 3) % 5);
            if (x >= 30) f.trimap.at(x, y) = TrimapLabel::Foreground;
            else if (x >= 18) f.trimap.at(x, y) = TrimapLabel::Unknown;
            f.input[i] = x >= 30 ? 1.0 : x >= 18 ? 0.5 : 0.0;
        }
    return f;
}

}  // namespace

TEST(GuidedFilter, GreyGuideMatchesDirectFormula) {
    const EdgeFixture f = edge_fixture();
    const double eps = 1e-3;
    const AlphaMatte a = guided_filter_alpha(ImageBuffer(f.w, f.h, 1, f.grey), f.trimap, 4, eps);
    const auto q = brute_guided(f.grey, f.input, f.w, f.h, 4, eps);
    for (std::size_t i = 0; i < q.size(); ++i) {
        if (f.trimap.storage()[i] != TrimapLabel::Unknown) continue;
        EXPECT_NEAR(a.storage()[i], std::clamp(q[i], 0.0, 1.0), 1e-9) << i;
    }
    // Alpha steps with the colour edge at x = 24.
    EXPECT_LT(a.at(22, 8), 0.5);
    EXPECT_GT(a.at(25, 8), 0.5);
}

// With identical channels the colour system (S + eps I) a = cov has the
// solution a = t * (1,1,1) with t = cov / (3 var + eps), which is the grey
// filter at eps / 3 spread over three channels.
TEST(GuidedFilter, EqualChannelsReduceToGreyFilter) {
    const EdgeFixture f = edge_fixture();
    const double eps = 3e-3;
    ImageBuffer rgb(f.w, f.h, 3);
    for (std::size_t i = 0; i < f.grey.size(); ++i)
        for (int c = 0; c < 3; ++c) rgb.storage()[3 * i + c] = f.grey[i];
    const AlphaMatte colour = guided_filter_alpha(rgb, f.trimap, 4, eps);
    const AlphaMatte grey = guided_filter_alpha(ImageBuffer(f.w, f.h, 1, f.grey), f.trimap, 4, eps / 3.0);
    EXPECT_LT(max_abs_diff(colour.storage(), grey.storage()), 1e-8);
}

TEST(DistanceTransform, MatchesBruteForce) {
    std::mt19937 rng(8);
    const int w = 19, h = 14;
    std::vector<std::uint8_t> f(w * h);
    for (auto& v : f) v = rng() % 17 == 0;
    const auto d = squared_distance_transform(f, w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            double best = std::numeric_limits<double>::infinity();
            for (int yy = 0; yy < h; ++yy)
                for (int xx = 0; xx < w; ++xx)
                    if (f[yy * w + xx]) best = std::min(best, double((x - xx) * (x - xx) + (y - yy) * (y - yy)));
            EXPECT_EQ(d[y * w + x], best);
        }
    const auto none = squared_distance_transform(std::vector<std::uint8_t>(6, 0), 3, 2);
    for (double v : none) EXPECT_TRUE(std::isinf(v));
}

TEST(Feather, RingMidlineIsHalf) {
    const Trimap t = generate_trimap(rect_mask(64, 64, 22, 22, 20, 20), params(3, 3));
    const AlphaMatte a = feather_alpha(t);
    expect_known_pixels_exact(t, a);
    // Row 32 crosses the left ring at x = 19..24; the mask edge sits between
    // x = 21 and 22.
    EXPECT_NEAR(0.5 * (a.at(21, 32) + a.at(22, 32)), 0.5, 0.1);
    EXPECT_NEAR(0.5 * (a.at(41, 32) + a.at(42, 32)), 0.5, 0.1);
    for (int x = 19; x < 25; ++x) EXPECT_LE(a.at(x, 32), a.at(x + 1, 32));
}

TEST(Feather, RatioOfDistances) {
    const Trimap t = generate_trimap(rect_mask(64, 64, 22, 22, 20, 20), params(3, 3));
    const AlphaMatte a = feather_alpha(t);
    // At (20, 32): nearest Background is x = 18 (distance 2), nearest
    // Foreground x = 25 (distance 5).
    EXPECT_NEAR(a.at(20, 32), 2.0 / 7.0, 1e-12);
}

TEST(Gate, ExtremesAndFrequency) {
    RandomStream s(42);
    for (int i = 0; i < 100; ++i) {
        EXPECT_TRUE(matte_gate(s, 1.0));
        EXPECT_FALSE(matte_gate(s, 0.0));
    }
    RandomStream g(derive_seed(7, "gate", "matting"));
    int hits = 0;
    for (int i = 0; i < 10000; ++i) hits += matte_gate(g, 0.9);
    EXPECT_GE(hits, 8800);
    EXPECT_LE(hits, 9200);
    EXPECT_THROW(matte_gate(s, 1.5), InvalidInputError);
}

TEST(MattingParams, Validation) {
    MattingParams p;
    EXPECT_NO_THROW(p.validate());
    p.guided_epsilon = 0.0;
    EXPECT_THROW(p.validate(), InvalidInputError);
    p = {};
    p.erode_radius = -1;
    EXPECT_THROW(p.validate(), InvalidInputError);
    EXPECT_EQ(matting_method_from_string(to_string(MattingMethod::Feather)), MattingMethod::Feather);
    EXPECT_THROW(matting_method_from_string("deep"), InvalidInputError);
}
