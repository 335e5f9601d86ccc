#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "doctest.h"
#include "fpq/numkit/errors.hpp"
#include "fpq/psc.hpp"

using namespace fpq;
using namespace fpq::psc;

namespace {

double sqdist(const Vector& a, const Vector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return s;
}

// Every codeword of the (signed) permutation code, built independently of
// the encoder: distinct permutations of the expanded initial codeword, then
// every sign pattern on the nonzero entries.
std::vector<Vector> brute_codebook(const Vector& expanded, bool signed_code) {
    Vector base = expanded;
    std::sort(base.begin(), base.end());
    std::vector<Vector> out;
    do {
        if (!signed_code) {
            out.push_back(base);
            continue;
        }
        std::vector<std::size_t> nz;
        for (std::size_t i = 0; i < base.size(); ++i)
            if (base[i] != 0.0) nz.push_back(i);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << nz.size()); ++mask) {
            Vector v = base;
            for (std::size_t b = 0; b < nz.size(); ++b)
                if ((mask >> b) & 1u) v[nz[b]] = -v[nz[b]];
            out.push_back(v);
        }
    } while (std::next_permutation(base.begin(), base.end()));
    return out;
}

Vector random_descending(std::mt19937_64& g, std::size_t k, bool nonnegative) {
    std::normal_distribution<double> d;
    Vector v(k);
    for (double& x : v) x = nonnegative ? std::abs(d(g)) : d(g);
    std::sort(v.begin(), v.end(), std::greater<>());
    for (std::size_t i = 1; i < k; ++i)
        if (v[i] >= v[i - 1]) v[i] = v[i - 1] - 0.1;
    if (nonnegative && v.back() < 0.0) v.back() = 0.0;
    return v;
}

Composition random_composition(std::mt19937_64& g, std::size_t total) {
    std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << (total - 1)) - 1);
    return Composition::from_id(total, d(g));
}

}  // namespace

TEST_CASE("composition basics") {
    const Composition c({2, 3, 2});
    CHECK(c.total() == 7);
    CHECK(c.blocks() == 3);
    CHECK(c.start(2) == 5);
    CHECK(c.to_string() == "2-3-2");
    CHECK(Composition::parse("2-3-2") == c);
    CHECK(Composition::from_id(7, c.id()) == c);
    CHECK(c.block_of_position() == std::vector<std::size_t>{0, 0, 1, 1, 1, 2, 2});

    for (std::size_t m = 1; m <= 8; ++m) {
        const auto all = Composition::all(m);
        CHECK(all.size() == (std::size_t{1} << (m - 1)));
        std::set<std::string> seen;
        for (const auto& x : all) {
            CHECK(x.total() == m);
            seen.insert(x.to_string());
        }
        CHECK(seen.size() == all.size());
    }
    CHECK_THROWS_AS(Composition({}), ContractError);
    CHECK_THROWS_AS(Composition({1, 0}), ContractError);
    CHECK_THROWS_AS(Composition::parse("2--1"), ContractError);
    CHECK_THROWS_AS(Composition::from_id(3, 4), ContractError);
}

TEST_CASE("initial codeword contract") {
    CHECK_THROWS_AS(InitialCodeword({1.0, 1.0}, Variant::I), ContractError);
    CHECK_THROWS_AS(InitialCodeword({1.0, -0.5}, Variant::II), ContractError);
    const InitialCodeword mu({2.0, -1.0}, Variant::I);
    CHECK(mu.expand(Composition({2, 1})) == Vector{2.0, 2.0, -1.0});
    CHECK_THROWS_AS(mu.expand(Composition({3})), ShapeError);
}

TEST_CASE("encode examples") {
    const Composition two({1, 1});
    const PermutationCode a = encode_v1(Vector{0.2, 0.7}, two);
    CHECK(a.order == std::vector<std::size_t>{1, 0});

    const PermutationCode b = encode_v1(Vector{3, 1, 2}, Composition({1, 1, 1}));
    CHECK(b.order == std::vector<std::size_t>{0, 2, 1});

    // ties: the earlier index goes to the higher block
    const PermutationCode t = encode_v1(Vector{1.0, 1.0, 1.0}, Composition({2, 1}));
    CHECK(t.order == std::vector<std::size_t>{0, 1, 2});
    const PermutationCode t2 = encode_v1(Vector{0.0, 1.0, 1.0}, Composition({1, 2}));
    CHECK(t2.order == std::vector<std::size_t>{1, 0, 2});

    const PermutationCode c = encode_v2(Vector{-0.7, 0.2}, two);
    CHECK(c.order == std::vector<std::size_t>{0, 1});
    CHECK(c.signs == std::vector<int>{-1, 1});
    CHECK(c.coded_signs == 1);

    const PermutationCode d = encode_v2(Vector{0.1, -0.5, 0.4}, Composition({1, 1, 1}));
    CHECK(d.order == std::vector<std::size_t>{1, 2, 0});
    CHECK(d.signs == std::vector<int>{-1, 1, 1});

    CHECK_THROWS_AS(encode_v1(Vector{1, 2, 3}, two), ShapeError);
}

TEST_CASE("decode examples") {
    const Composition two({1, 1});
    const InitialCodeword mu({1.0, -1.0}, Variant::I);
    CHECK(decode(encode_v1(Vector{1, 0}, two), mu, two) == Vector{1.0, -1.0});
    CHECK(decode(encode_v1(Vector{0, 1}, two), mu, two) == Vector{-1.0, 1.0});
    PermutationCode bad;
    bad.order = {0};
    bad.signs = {1};
    CHECK_THROWS_AS(decode(bad, mu, two), ShapeError);
}

TEST_CASE("nearest-neighbor optimality against the enumerated codebook") {
    std::mt19937_64 g(17);
    std::normal_distribution<double> d;
    for (int t = 0; t < 300; ++t) {
        const std::size_t n = 1 + t % 6;
        const Composition comp = random_composition(g, n);
        const bool v2 = t % 2 == 1;
        const bool zero_last = v2 && t % 4 == 1;
        Vector mu_values = random_descending(g, comp.blocks(), v2);
        if (zero_last) mu_values.back() = 0.0;
        if (v2 && comp.blocks() >= 2 && mu_values[comp.blocks() - 2] <= 0.0) continue;
        const InitialCodeword mu(mu_values, v2 ? Variant::II : Variant::I);
        Vector x(n);
        for (double& v : x) v = d(g);
        const PermutationCode c = v2 ? encode_v2(x, comp, !zero_last && mu_values.back() > 0.0) : encode_v1(x, comp);
        const Vector xh = decode(c, mu, comp);
        double best = INFINITY;
        for (const Vector& w : brute_codebook(mu.expand(comp), v2)) best = std::min(best, sqdist(x, w));
        CHECK(sqdist(x, xh) <= best + 1e-12);
    }
}

TEST_CASE("signed codebook size matches enumeration for n = (2,2)") {
    std::mt19937_64 g(4);
    const Composition comp({2, 2});
    const InitialCodeword mu({1.5, 0.5}, Variant::II);
    const auto book = brute_codebook(mu.expand(comp), true);
    CHECK(book.size() == 96);
    CHECK(codebook_size(comp, Variant::II, false) == 96);
    std::normal_distribution<double> d;
    for (int t = 0; t < 100; ++t) {
        Vector x(4);
        for (double& v : x) v = d(g);
        const Vector xh = decode(encode_v2(x, comp, true), mu, comp);
        double best = INFINITY;
        for (const Vector& w : book) best = std::min(best, sqdist(x, w));
        CHECK(std::abs(sqdist(x, xh) - best) < 1e-12);
    }
}

TEST_CASE("decode then encode is the identity on codes") {
    std::mt19937_64 g(23);
    for (int t = 0; t < 500; ++t) {
        const std::size_t n = 1 + t % 9;
        const Composition comp = random_composition(g, n);
        const bool v2 = t % 2 == 0;
        const std::size_t h = v2 ? n - comp.last() : 0;
        std::uniform_int_distribution<std::uint64_t> pick(0, 1u << 20);
        const BigInt size = codebook_size(comp, v2 ? Variant::II : Variant::I, true);
        const BigInt index = BigInt(pick(g)) % size;
        const PermutationCode c = unrank_codeword(index, comp, v2 ? Variant::II : Variant::I, h);
        Vector mu_values = random_descending(g, comp.blocks(), v2);
        if (v2) {
            mu_values.back() = 0.0;
            if (comp.blocks() >= 2 && mu_values[comp.blocks() - 2] <= 0.0) continue;
        }
        const InitialCodeword mu(mu_values, v2 ? Variant::II : Variant::I);
        const Vector y = decode(c, mu, comp);
        const PermutationCode back = v2 ? encode_v2(y, comp) : encode_v1(y, comp);
        CHECK(back == c);
        CHECK(rank_codeword(back, comp) == index);
    }
}

TEST_CASE("codebook sizes and rates") {
    CHECK(codebook_size(Composition({1, 1, 1, 1}), Variant::I) == 24);
    CHECK(codebook_size(Composition({2, 2}), Variant::I) == 6);
    CHECK(codebook_size(Composition({1, 1}), Variant::II, false) == 8);
    CHECK(codebook_size(Composition({1, 1}), Variant::II, true) == 4);
    CHECK(std::abs(rate(Composition({1, 1, 1, 1}), Variant::I) - std::log2(24.0) / 4.0) < 1e-15);
    CHECK(std::abs(rate(Composition({1, 1, 1, 1}), Variant::I) - 1.1462) < 1e-4);
    CHECK(rate(Composition({5}), Variant::I) == 0.0);
    CHECK(std::abs(rate(Composition({1, 1}), Variant::II, false) - 1.5) < 1e-15);

    // 21! overflows 64 bits
    const std::vector<std::size_t> ones(25, 1);
    const BigInt big = codebook_size(Composition(ones), Variant::I);
    CHECK(big == BigInt("15511210043330985984000000"));
    CHECK(std::abs(log2_big(big) - 83.68151) < 1e-4);
    CHECK(codeword_bits(BigInt(6)) == 3);
    CHECK(codeword_bits(BigInt(8)) == 3);
    CHECK(codeword_bits(BigInt(1)) == 0);
}

TEST_CASE("rank and unrank") {
    const Composition two({1, 1});
    CHECK(rank_codeword(encode_v1(Vector{1, 0}, two), two) == 0);
    CHECK(rank_codeword(encode_v1(Vector{0, 1}, two), two) == 1);

    // n = (2,2): unrank walks the multiset permutations of (0,0,1,1) in order.
    const Composition c({2, 2});
    std::vector<std::size_t> lab{0, 0, 1, 1};
    BigInt i = 0;
    do {
        const PermutationCode code = unrank_codeword(i, c, Variant::I, 0);
        CHECK(labels(code, c) == lab);
        CHECK(rank_codeword(code, c) == i);
        ++i;
    } while (std::next_permutation(lab.begin(), lab.end()));
    CHECK(i == 6);
    CHECK_THROWS_AS(unrank_codeword(6, c, Variant::I, 0), ContractError);
    CHECK_THROWS_AS(unrank_codeword(-1, c, Variant::I, 0), ContractError);

    std::mt19937_64 g(9);
    std::normal_distribution<double> d;
    for (int t = 0; t < 200; ++t) {
        const Composition comp = random_composition(g, 1 + t % 12);
        Vector x(comp.total());
        for (double& v : x) v = d(g);
        const PermutationCode code = t % 2 ? encode_v2(x, comp, t % 4 == 1) : encode_v1(x, comp);
        const BigInt r = rank_codeword(code, comp);
        CHECK(r < codebook_size(comp, code.variant, !(t % 4 == 1)));
        const PermutationCode back = unrank_codeword(r, comp, code.variant, code.coded_signs);
        CHECK(back == code);
        CHECK(rank_codeword(back, comp) == r);
    }
}

TEST_CASE("order statistic means") {
    const OrderStatistics u = order_statistic_means(Source::UniformBox, 2, false);
    CHECK(std::abs(u.means[0] - 1.0 / 6.0) < 1e-15);
    CHECK(std::abs(u.means[1] + 1.0 / 6.0) < 1e-15);
    const OrderStatistics um = order_statistic_means(Source::UniformBox, 3, true);
    CHECK(std::abs(um.means[0] - 0.375) < 1e-15);

    const OrderStatistics gs = order_statistic_means(Source::Gaussian, 2, false, 200000, 3);
    CHECK(std::abs(gs.means[0] - 1.0 / std::sqrt(std::numbers::pi)) < 3.0 * gs.stderrs[0]);

    const OrderStatistics gm = order_statistic_means(Source::Gaussian, 5, true, 20000, 4);
    for (std::size_t i = 1; i < 5; ++i) CHECK(gm.means[i] <= gm.means[i - 1]);
    for (double m : gm.means) CHECK(m >= 0.0);
    CHECK_THROWS_AS(order_statistic_means(Source::UnitSphere, 3, false), ContractError);
    CHECK_THROWS_AS(parse_source("laplace"), ContractError);
}

TEST_CASE("optimal initial codewords") {
    const InitialCodeword a = optimal_initial_codeword(Composition({1, 1}), Vector{1.0 / 6, -1.0 / 6}, Variant::I);
    CHECK(a.values() == Vector{1.0 / 6, -1.0 / 6});
    const InitialCodeword b = optimal_initial_codeword(Composition({2}), Vector{1.0 / 6, -1.0 / 6}, Variant::I);
    CHECK(std::abs(b.values()[0]) < 1e-17);
    const InitialCodeword c = optimal_initial_codeword(Composition({2, 1}), Vector{3, 1, -1}, Variant::I);
    CHECK(c.values() == Vector{2, -1});
    CHECK_THROWS_AS(optimal_initial_codeword(Composition({2, 1}), Vector{1, 3, -1}, Variant::I), ContractError);
    CHECK_THROWS_AS(optimal_initial_codeword(Composition({2, 1}), Vector{1, -1}, Variant::I), ShapeError);
}

TEST_CASE("psc distortion") {
    const Estimate flat = psc_distortion(Composition({4}), InitialCodeword({0.0}, Variant::I), Source::UniformBox,
                                         200000, 1);
    CHECK(std::abs(flat.mean - 1.0 / 12.0) < 3.0 * flat.std_error);

    // Midpoint-rule integral over the unit square of the sorted-pair error.
    const int grid = 1000;
    double q = 0.0;
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const double a = -0.5 + (i + 0.5) / grid, b = -0.5 + (j + 0.5) / grid;
            const double hi = std::max(a, b), lo = std::min(a, b);
            q += ((hi - 1.0 / 6) * (hi - 1.0 / 6) + (lo + 1.0 / 6) * (lo + 1.0 / 6)) / 2.0;
        }
    q /= double(grid) * grid;
    const Estimate pair = psc_distortion(Composition({1, 1}), InitialCodeword({1.0 / 6, -1.0 / 6}, Variant::I),
                                         Source::UniformBox, 200000, 2);
    CHECK(std::abs(pair.mean - q) < 3.0 * pair.std_error);

    const Composition comp({1, 2, 1});
    const OrderStatistics os = order_statistic_means(Source::UniformBox, 4, false);
    const InitialCodeword best = optimal_initial_codeword(comp, os.means, Variant::I);
    const Estimate d0 = psc_distortion(comp, best, Source::UniformBox, 100000, 5);
    std::mt19937_64 g(6);
    std::uniform_real_distribution<double> jitter(-0.05, 0.05);
    for (int t = 0; t < 10; ++t) {
        Vector v = best.values();
        for (double& x : v) x += jitter(g);
        std::sort(v.begin(), v.end(), std::greater<>());
        const Estimate dp = psc_distortion(comp, InitialCodeword(v, Variant::I), Source::UniformBox, 100000, 5);
        CHECK(d0.mean <= dp.mean);
    }

    // Refining (2,2) into (1,1,2) cannot hurt.
    const Composition coarse({2, 2}), fine({1, 1, 2});
    const Estimate dc = psc_distortion(coarse, optimal_initial_codeword(coarse, os.means, Variant::I),
                                       Source::UniformBox, 100000, 7);
    const Estimate df = psc_distortion(fine, optimal_initial_codeword(fine, os.means, Variant::I),
                                       Source::UniformBox, 100000, 8);
    CHECK(df.mean <= dc.mean + 3.0 * std::hypot(dc.std_error, df.std_error));

    // Variant II with magnitude means
    const OrderStatistics om = order_statistic_means(Source::UniformBox, 3, true);
    const InitialCodeword m2 = optimal_initial_codeword(Composition({1, 1, 1}), om.means, Variant::II);
    const Estimate d2 = psc_distortion(Composition({1, 1, 1}), m2, Source::UniformBox, 50000, 9);
    CHECK(d2.mean < 1.0 / 12.0);
}
