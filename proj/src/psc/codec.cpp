#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpq/numkit/errors.hpp"
#include "fpq/psc.hpp"

namespace fpq::psc {

namespace {

// Stable descending sort by key picks block membership; each block is then
// listed in ascending original index.
std::vector<std::size_t> canonical_order(std::span<const double> key, const Composition& n) {
    if (key.size() != n.total()) throw ShapeError("encode: vector length differs from composition total");
    std::vector<std::size_t> order(key.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] > key[b]; });
    for (std::size_t i = 0; i < n.blocks(); ++i) {
        auto first = order.begin() + static_cast<std::ptrdiff_t>(n.start(i));
        std::sort(first, first + static_cast<std::ptrdiff_t>(n[i]));
    }
    return order;
}

}  // namespace

PermutationCode encode_v1(std::span<const double> z, const Composition& n) {
    PermutationCode c;
    c.order = canonical_order(z, n);
    c.signs.assign(z.size(), 1);
    c.variant = Variant::I;
    c.coded_signs = 0;
    return c;
}

PermutationCode encode_v2(std::span<const double> z, const Composition& n, bool code_last_block) {
    Vector mag(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) mag[i] = std::abs(z[i]);
    PermutationCode c;
    c.order = canonical_order(mag, n);
    c.variant = Variant::II;
    c.coded_signs = code_last_block ? n.total() : n.total() - n.last();
    c.signs.assign(z.size(), 1);
    for (std::size_t i = 0; i < c.coded_signs; ++i) c.signs[i] = z[c.order[i]] < 0.0 ? -1 : 1;
    return c;
}

Vector decode(const PermutationCode& c, const InitialCodeword& mu, const Composition& n) {
    if (c.order.size() != n.total() || c.signs.size() != n.total())
        throw ShapeError("decode: codeword length differs from composition total");
    const Vector sorted = mu.expand(n);
    Vector out(n.total());
    for (std::size_t i = 0; i < n.total(); ++i) out[c.order[i]] = c.signs[i] * sorted[i];
    return out;
}

std::vector<std::size_t> labels(const PermutationCode& c, const Composition& n) {
    if (c.order.size() != n.total()) throw ShapeError("labels: codeword length differs from composition total");
    const std::vector<std::size_t> block = n.block_of_position();
    std::vector<std::size_t> out(n.total(), n.blocks());
    for (std::size_t i = 0; i < n.total(); ++i) {
        if (c.order[i] >= n.total() || out[c.order[i]] != n.blocks())
            throw ContractError("labels: order is not a permutation");
        out[c.order[i]] = block[i];
    }
    return out;
}

}  // namespace fpq::psc
