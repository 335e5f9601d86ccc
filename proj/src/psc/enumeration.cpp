#include <cmath>

#include "fpq/numkit/errors.hpp"
#include "fpq/psc.hpp"

namespace fpq::psc {

namespace {

BigInt factorial(std::size_t k) {
    BigInt f = 1;
    for (std::size_t i = 2; i <= k; ++i) f *= i;
    return f;
}

BigInt multinomial(const std::vector<std::size_t>& counts) {
    std::size_t total = 0;
    BigInt denom = 1;
    for (std::size_t c : counts) {
        total += c;
        denom *= factorial(c);
    }
    return factorial(total) / denom;
}

}  // namespace

BigInt codebook_size(const Composition& n, Variant v, bool mu_k_zero) {
    BigInt l = multinomial(n.parts());
    if (v == Variant::II) {
        const std::size_t h = mu_k_zero ? n.total() - n.last() : n.total();
        l <<= static_cast<unsigned>(h);
    }
    return l;
}

double log2_big(const BigInt& x) {
    if (x <= 0) throw ContractError("log2_big: argument must be positive");
    // Keep the top 53 bits for the mantissa.
    const std::size_t bits = boost::multiprecision::msb(x) + 1;
    if (bits <= 60) return std::log2(x.convert_to<double>());
    const std::size_t shift = bits - 60;
    const BigInt top = x >> static_cast<unsigned>(shift);
    return std::log2(top.convert_to<double>()) + double(shift);
}

double rate(const Composition& n, Variant v, bool mu_k_zero) {
    return log2_big(codebook_size(n, v, mu_k_zero)) / double(n.total());
}

BigInt rank_codeword(const PermutationCode& c, const Composition& n) {
    const std::vector<std::size_t> lab = labels(c, n);
    std::vector<std::size_t> counts = n.parts();
    BigInt remaining_perms = multinomial(counts);
    std::size_t remaining = n.total();
    BigInt rank = 0;
    for (std::size_t pos = 0; pos < lab.size(); ++pos) {
        // Permutations starting with label b: remaining_perms * counts[b] / remaining.
        for (std::size_t b = 0; b < lab[pos]; ++b) {
            if (counts[b] == 0) continue;
            rank += remaining_perms * counts[b] / remaining;
        }
        remaining_perms = remaining_perms * counts[lab[pos]] / remaining;
        --counts[lab[pos]];
        --remaining;
    }
    if (c.variant == Variant::II) {
        if (c.coded_signs > n.total()) throw ContractError("rank_codeword: more coded signs than positions");
        for (std::size_t i = 0; i < c.coded_signs; ++i) {
            rank <<= 1;
            if (c.signs[i] < 0) rank += 1;
        }
    }
    return rank;
}

PermutationCode unrank_codeword(const BigInt& index, const Composition& n, Variant v, std::size_t coded_signs) {
    if (v == Variant::I) coded_signs = 0;
    if (coded_signs > n.total()) throw ContractError("unrank_codeword: more coded signs than positions");
    const BigInt perms = multinomial(n.parts());
    const BigInt size = perms << static_cast<unsigned>(coded_signs);
    if (index < 0 || index >= size) throw ContractError("unrank_codeword: index out of range");

    BigInt perm_index = index >> static_cast<unsigned>(coded_signs);
    PermutationCode c;
    c.variant = v;
    c.coded_signs = coded_signs;
    c.signs.assign(n.total(), 1);
    for (std::size_t i = 0; i < coded_signs; ++i) {
        const unsigned bit = static_cast<unsigned>(coded_signs - 1 - i);
        if (bit_test(index, bit)) c.signs[i] = -1;
    }

    std::vector<std::size_t> counts = n.parts();
    BigInt remaining_perms = perms;
    std::size_t remaining = n.total();
    std::vector<std::size_t> lab(n.total());
    for (std::size_t pos = 0; pos < n.total(); ++pos) {
        for (std::size_t b = 0; b < counts.size(); ++b) {
            if (counts[b] == 0) continue;
            const BigInt with_b = remaining_perms * counts[b] / remaining;
            if (perm_index < with_b) {
                lab[pos] = b;
                remaining_perms = with_b;
                --counts[b];
                break;
            }
            perm_index -= with_b;
        }
        --remaining;
    }

    // Positions of each block in ascending original order give the canonical P.
    c.order.reserve(n.total());
    for (std::size_t b = 0; b < n.blocks(); ++b)
        for (std::size_t pos = 0; pos < n.total(); ++pos)
            if (lab[pos] == b) c.order.push_back(pos);
    return c;
}

std::size_t codeword_bits(const BigInt& codebook_size) {
    if (codebook_size <= 1) return 0;
    const BigInt top = codebook_size - 1;
    return boost::multiprecision::msb(top) + 1;
}

}  // namespace fpq::psc
