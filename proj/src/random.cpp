#include "splicegen/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "splicegen/error.hpp"

namespace splicegen {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

std::uint64_t fnv1a(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t global_seed, std::string_view record_id,
                          std::string_view stage) {
    std::uint64_t h = splitmix64(global_seed);
    h = splitmix64(h ^ fnv1a(record_id));
    h = splitmix64(h ^ fnv1a(stage));
    return h;
}

double RandomStream::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

int RandomStream::uniform_int(int lo, int hi) {
    if (hi < lo) throw InvalidInputError("uniform_int: empty range");
    const double span = static_cast<double>(hi) - lo + 1.0;
    const int v = lo + static_cast<int>(std::floor(uniform() * span));
    return v > hi ? hi : v;
}

double RandomStream::normal() {
    // Box-Muller; 1 - u keeps the log argument in (0,1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::size_t RandomStream::weighted_index(std::span<const double> weights) {
    const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (weights.empty() || !(total > 0.0))
        throw InvalidInputError("weighted_index: weights must not all be zero");
    const double target = uniform() * total;
    double acc = 0.0;
    std::size_t last = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        acc += weights[i];
        last = i;
        if (target < acc) return i;
    }
    return last;
}

}  // namespace splicegen
