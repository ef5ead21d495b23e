#include <gtest/gtest.h>

#include <set>

#include "splicegen/random.hpp"

using namespace splicegen;

TEST(DeriveSeed, StableAndDistinct) {
    EXPECT_EQ(derive_seed(1, "a", "x"), derive_seed(1, "a", "x"));
    std::set<std::uint64_t> seen;
    for (std::uint64_t g : {0ull, 1ull, 2ull})
        for (const char* r : {"a", "b", "ab"})
            for (const char* s : {"x", "y"}) seen.insert(derive_seed(g, r, s));
    EXPECT_EQ(seen.size(), 18u);
    // Concatenation ambiguity: ("ab","c") vs ("a","bc").
    EXPECT_NE(derive_seed(0, "ab", "c"), derive_seed(0, "a", "bc"));
}

TEST(RandomStream, Reproducible) {
    RandomStream a(5), b(5);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.uniform(), b.uniform());
}

TEST(RandomStream, UniformMappingIsDocumented) {
    // uniform() is the top 53 bits of the engine output scaled by 2^-53.
    std::mt19937_64 e(9);
    RandomStream s(9);
    for (int i = 0; i < 20; ++i) EXPECT_EQ(s.uniform(), static_cast<double>(e() >> 11) * 0x1.0p-53);
}

TEST(RandomStream, Ranges) {
    RandomStream s(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = s.uniform();
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        const int k = s.uniform_int(-2, 3);
        EXPECT_GE(k, -2);
        EXPECT_LE(k, 3);
    }
    EXPECT_EQ(s.uniform_int(4, 4), 4);
}

TEST(RandomStream, MomentsAndWeights) {
    RandomStream s(2);
    double sum = 0.0, sq = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const double z = s.normal();
        sum += z;
        sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.02);
    EXPECT_NEAR(sq / n, 1.0, 0.02);

    const std::vector<double> w{1.0, 0.0, 3.0};
    int counts[3] = {0, 0, 0};
    for (int i = 0; i < 40000; ++i) ++counts[s.weighted_index(w)];
    EXPECT_EQ(counts[1], 0);
    EXPECT_NEAR(counts[2] / 40000.0, 0.75, 0.01);
}
