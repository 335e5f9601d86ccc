#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "fpq/numkit/matrix.hpp"
#include "fpq/numkit/rng.hpp"

namespace fpq::psc {

using numkit::Vector;
using BigInt = boost::multiprecision::cpp_int;

enum class Variant { I = 1, II = 2 };

enum class Source { UniformBox, Gaussian, UnitSphere };

Source parse_source(const std::string& name);
std::string to_string(Source s);

/// One draw of length n from the source.
Vector draw(Source s, numkit::Rng& rng, std::size_t n);

/// Ordered composition n_1 + ... + n_K of a positive total.
class Composition {
public:
    explicit Composition(std::vector<std::size_t> parts);

    /// The composition whose cut set is the bit pattern `id`: bit i set means
    /// a block boundary after position i + 1. Ids run over [0, 2^(total-1)).
    static Composition from_id(std::size_t total, std::uint64_t id);
    /// All 2^(total-1) compositions, in id order.
    static std::vector<Composition> all(std::size_t total);
    /// Parses "2-3-2".
    static Composition parse(const std::string& text);

    const std::vector<std::size_t>& parts() const noexcept { return parts_; }
    std::size_t blocks() const noexcept { return parts_.size(); }  // K
    std::size_t total() const noexcept { return total_; }
    std::size_t operator[](std::size_t i) const { return parts_[i]; }
    std::size_t last() const noexcept { return parts_.back(); }
    /// Sorted position where block i starts (M_{i-1} in 0-based form).
    std::size_t start(std::size_t i) const { return starts_[i]; }
    /// Block index of each sorted position.
    std::vector<std::size_t> block_of_position() const;
    std::uint64_t id() const;
    std::string to_string() const;

    friend bool operator==(const Composition& a, const Composition& b) { return a.parts_ == b.parts_; }

private:
    std::vector<std::size_t> parts_;
    std::vector<std::size_t> starts_;
    std::size_t total_ = 0;
};

/// Strictly descending block values mu_1 > ... > mu_K; Variant II also
/// requires mu_K >= 0.
class InitialCodeword {
public:
    InitialCodeword(Vector values, Variant variant);

    const Vector& values() const noexcept { return values_; }
    Variant variant() const noexcept { return variant_; }
    std::size_t blocks() const noexcept { return values_.size(); }

    /// mu_i replicated n_i times.
    Vector expand(const Composition& n) const;

private:
    Vector values_;
    Variant variant_;
};

/// A permutation code with optional signs.
///
/// `order` is the permutation P as an index map: (P z)_i = z[order[i]].
/// Within each block, indices appear in ascending original order (the
/// canonical representative). `signs` is the diagonal of V, one entry per
/// sorted position; all +1 for Variant I, and +1 on every position whose sign
/// is not coded. The first `coded_signs` positions carry coded signs.
struct PermutationCode {
    std::vector<std::size_t> order;
    std::vector<int> signs;
    Variant variant = Variant::I;
    std::size_t coded_signs = 0;

    friend bool operator==(const PermutationCode&, const PermutationCode&) = default;
};

/// Canonical m-descending sort of z (stable: earlier index wins ties).
PermutationCode encode_v1(std::span<const double> z, const Composition& n);

/// Sort on |z|; signs recorded for the first N - n_K sorted positions, or
/// all N when `code_last_block` is set (initial codeword with mu_K > 0).
PermutationCode encode_v2(std::span<const double> z, const Composition& n, bool code_last_block = false);

/// Codeword vector P^{-1} V^{-1} mu_expanded.
Vector decode(const PermutationCode& c, const InitialCodeword& mu, const Composition& n);

/// Block label (block index) of each original position.
std::vector<std::size_t> labels(const PermutationCode& c, const Composition& n);

/// Exact codebook size: N!/prod n_i! (Variant I) times 2^h (Variant II),
/// with h = N - n_K when mu_K = 0, else h = N.
BigInt codebook_size(const Composition& n, Variant v, bool mu_k_zero = true);
double log2_big(const BigInt& x);
/// N^{-1} log2 L.
double rate(const Composition& n, Variant v, bool mu_k_zero = true);

/// Lexicographic rank among multiset permutations of the block labels,
/// times 2^h, plus the coded sign bits (1 = negative, first position most
/// significant).
BigInt rank_codeword(const PermutationCode& c, const Composition& n);
PermutationCode unrank_codeword(const BigInt& index, const Composition& n, Variant v, std::size_t coded_signs);

/// Fixed-rate bit count ceil(log2 L).
std::size_t codeword_bits(const BigInt& codebook_size);

struct OrderStatistics {
    Vector means;    // descending: index 0 is the largest
    Vector stderrs;  // zero for closed forms
};

/// E[xi_l] (or E[eta_l] of |x| when `magnitude`) for i.i.d. source
/// components. Uniform uses the closed form; Gaussian is Monte Carlo.
OrderStatistics order_statistic_means(Source s, std::size_t n, bool magnitude, std::size_t trials = 1000000,
                                      std::uint64_t seed = 1);

/// Monte Carlo order statistics of an arbitrary vector-valued sampler.
OrderStatistics sampled_order_statistics(const std::function<Vector(numkit::Rng&)>& sampler, bool magnitude,
                                         std::size_t trials, std::uint64_t seed);

/// Block averages of the order-statistic means.
InitialCodeword optimal_initial_codeword(const Composition& n, std::span<const double> means, Variant v);

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Monte Carlo N^{-1} E ||x - x_hat||^2 for nearest-neighbor PSC coding.
Estimate psc_distortion(const Composition& n, const InitialCodeword& mu, Source s, std::size_t trials,
                        std::uint64_t seed);

}  // namespace fpq::psc
