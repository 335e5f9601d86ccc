#include "fpq/numkit/rng.hpp"

#include <cmath>

namespace fpq::numkit {

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    return std::mt19937_64(seq);
}

}  // namespace

Rng::Rng(std::uint64_t seed) : Rng(seed, 0) {}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(make_engine(seed, stream)) {}

Vector Rng::uniform_box(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = unit_(engine_) - 0.5;
    return v;
}

Vector Rng::standard_gaussian(std::size_t n) {
    Vector v(n);
    for (double& x : v) x = normal_(engine_);
    return v;
}

Vector Rng::uniform_unit_sphere(std::size_t n) {
    for (;;) {
        Vector v = standard_gaussian(n);
        const double r = norm(v);
        if (r < 1e-150) continue;
        for (double& x : v) x /= r;
        return v;
    }
}

std::size_t Rng::below(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

}  // namespace fpq::numkit
