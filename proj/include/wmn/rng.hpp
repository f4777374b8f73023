#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace wmn {

// Seeded generator with portable distributions. The standard library
// distributions are implementation-defined, so sampling is done by hand on top
// of the (fully specified) mt19937_64 engine to keep runs bit-identical.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Uniform real in [0, 1).
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; derives independent stream seeds from one master seed.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream);

} // namespace wmn
