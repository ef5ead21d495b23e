#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace splicegen {

// Stable 64-bit seed for one (global seed, record, stage) triple. Records
// never share a stream, so batch order and worker count cannot change what
// any record draws.
std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id,
                          std::string_view stage);

// Deterministic random stream on top of mt19937_64. The value mappings are
// written out rather than taken from <random> distributions, whose output is
// implementation-defined, so files are reproducible across standard libraries.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0,1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    // Uniform integer in [lo, hi].
    int uniform_int(int lo, int hi);
    double normal();
    bool bernoulli(double p) { return uniform() < p; }
    // Index drawn proportionally to nonnegative weights (not all zero).
    std::size_t weighted_index(std::span<const double> weights);

private:
    std::mt19937_64 engine_;
};

}  // namespace splicegen
