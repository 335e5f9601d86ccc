#pragma once

#include <cstdint>
#include <random>

#include "fpq/numkit/matrix.hpp"

namespace fpq::numkit {

/// Seeded random stream. Deterministic per seed; substreams are derived
/// from (seed, stream id) through std::seed_seq so that workers never share
/// state.
class Rng {
public:
    explicit Rng(std::uint64_t seed);
    Rng(std::uint64_t seed, std::uint64_t stream);

    /// Uniform on [-1/2, 1/2)^n.
    Vector uniform_box(std::size_t n);
    /// i.i.d. N(0, 1) components.
    Vector standard_gaussian(std::size_t n);
    /// Uniform on the unit sphere in R^n (normalized Gaussian).
    Vector uniform_unit_sphere(std::size_t n);

    double uniform01() { return unit_(engine_); }
    double gaussian() { return normal_(engine_); }
    /// Uniform integer in [0, n).
    std::size_t below(std::size_t n);

    std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace fpq::numkit
