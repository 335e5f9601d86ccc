#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/linalg.hpp"
#include "fpq/quant.hpp"

using namespace fpq;
using namespace fpq::quant;
using frames::modulated_htf;

namespace {

const double kZeta = 1.0 / std::sqrt(2.0);

Vector gaussian(std::mt19937_64& g, std::size_t n) {
    std::normal_distribution<double> d;
    Vector v(n);
    for (double& x : v) x = d(g);
    return v;
}

Composition random_composition(std::mt19937_64& g, std::size_t total) {
    std::uniform_int_distribution<std::uint64_t> d(0, (std::uint64_t{1} << (total - 1)) - 1);
    return Composition::from_id(total, d(g));
}

InitialCodeword random_mu(std::mt19937_64& g, std::size_t k, Variant v) {
    Vector mu = gaussian(g, k);
    if (v == Variant::II)
        for (double& x : mu) x = std::abs(x);
    std::sort(mu.begin(), mu.end(), std::greater<>());
    for (std::size_t i = 1; i < k; ++i)
        if (mu[i] >= mu[i - 1]) mu[i] = mu[i - 1] - 1e-3;
    if (v == Variant::II && mu.back() < 0.0) mu.back() = 0.0;
    return InitialCodeword(mu, v);
}

std::multiset<std::vector<long long>> row_set(const Matrix& b) {
    std::multiset<std::vector<long long>> s;
    for (std::size_t i = 0; i < b.rows(); ++i) {
        std::vector<long long> r;
        for (double v : b.row(i)) r.push_back(std::llround(v * 1e9));
        s.insert(r);
    }
    return s;
}

}  // namespace

TEST_CASE("difference matrix") {
    const Matrix printed{
        {1, 0, -1, 0, 0, 0, 0}, {0, 1, -1, 0, 0, 0, 0}, {1, 0, 0, -1, 0, 0, 0}, {0, 1, 0, -1, 0, 0, 0},
        {1, 0, 0, 0, -1, 0, 0}, {0, 1, 0, 0, -1, 0, 0}, {0, 0, 1, 0, 0, -1, 0}, {0, 0, 0, 1, 0, -1, 0},
        {0, 0, 0, 0, 1, -1, 0}, {0, 0, 1, 0, 0, 0, -1}, {0, 0, 0, 1, 0, 0, -1}, {0, 0, 0, 0, 1, 0, -1}};
    CHECK(difference_matrix(Composition({2, 3, 2})) == printed);

    const Matrix band = difference_matrix(Composition({1, 1, 1, 1}));
    CHECK(band == Matrix{{1, -1, 0, 0}, {0, 1, -1, 0}, {0, 0, 1, -1}});
    CHECK(difference_matrix(Composition({5})).rows() == 0);
    CHECK(difference_matrix(Composition({5})).cols() == 5);

    for (std::size_t m = 1; m <= 8; ++m)
        for (const Composition& c : Composition::all(m)) {
            const Matrix d = difference_matrix(c);
            CHECK(d.rows() == difference_rows(c));
            for (std::size_t i = 0; i < d.rows(); ++i) {
                int plus = 0, minus = 0, zero = 0;
                for (double v : d.row(i)) {
                    if (v == 1.0) ++plus;
                    else if (v == -1.0) ++minus;
                    else if (v == 0.0) ++zero;
                }
                CHECK(plus == 1);
                CHECK(minus == 1);
                CHECK(zero == int(m) - 2);
            }
        }
}

TEST_CASE("extended difference matrix") {
    CHECK(extended_difference_matrix(Composition({1, 1})) == Matrix{{1, -1}, {1, 0}});
    const Matrix e = extended_difference_matrix(Composition({2, 1}));
    CHECK(e.rows() == 4);
    CHECK(e == Matrix{{1, 0, -1}, {0, 1, -1}, {1, 0, 0}, {0, 1, 0}});
    const Composition c({2, 3, 2});
    const Matrix x = extended_difference_matrix(c);
    CHECK(x.rows() == difference_rows(c) + 3);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        double s = 0.0;
        for (double v : x.row(i)) s += v;
        CHECK(s == (i < difference_rows(c) ? 0.0 : 1.0));
    }
    CHECK_THROWS_AS(extended_difference_matrix(Composition({3})), ContractError);
}

TEST_CASE("fpq encoding") {
    std::mt19937_64 g(1);
    SUBCASE("identity frame reduces to psc") {
        for (int t = 0; t < 200; ++t) {
            const std::size_t n = 1 + t % 7;
            const Composition c = random_composition(g, n);
            const Vector x = gaussian(g, n);
            const frames::Frame id = frames::identity_frame(n);
            CHECK(fpq_encode_v1(id, c, x) == psc::encode_v1(x, c));
            CHECK(fpq_encode_v2(id, c, x) == psc::encode_v2(x, c));
            const InitialCodeword mu = random_mu(g, c.blocks(), Variant::I);
            CHECK(canonical_decode(id, c, mu, fpq_encode_v1(id, c, x)) == psc::decode(psc::encode_v1(x, c), mu, c));
        }
    }
    SUBCASE("hand-sorted example") {
        const frames::Frame f = modulated_htf(2, 4, -1);
        const FpqCode code = fpq_encode_v1(f, Composition({2, 2}), Vector{1, 0});
        CHECK(code.order == std::vector<std::size_t>{0, 3, 1, 2});
    }
    SUBCASE("scale invariance and duality") {
        const frames::Frame f = modulated_htf(3, 6);
        for (int t = 0; t < 300; ++t) {
            const Composition c = random_composition(g, 6);
            const Vector x = gaussian(g, 3);
            Vector x2 = x;
            for (double& v : x2) v *= 3.7;
            const Variant v = t % 2 ? Variant::II : Variant::I;
            const FpqCode code = fpq_encode(f, c, x, v);
            CHECK(fpq_encode(f, c, x2, v) == code);
            // sorted coefficients satisfy the differencing rows exactly
            const Vector z = permuted_analysis(f, code) * x;
            const Matrix d = v == Variant::I || c.blocks() < 2 ? difference_matrix(c) : extended_difference_matrix(c);
            const Vector dz = d * z;
            for (double s : dz) CHECK(s >= 0.0);
            CHECK(cell_system(f, c, code).check(x) >= -1e-12);
            CHECK(consistency_system(f, c, code).check(x) >= -1e-12);
        }
    }
    SUBCASE("all-negative coefficients") {
        const frames::Frame id = frames::identity_frame(4);
        const FpqCode code = fpq_encode_v2(id, Composition({1, 1, 1, 1}), Vector{-0.4, -0.1, -0.3, -0.2});
        CHECK(code.order == std::vector<std::size_t>{0, 2, 3, 1});
        CHECK(code.signs == std::vector<int>{-1, -1, -1, 1});
        CHECK(code.coded_signs == 3);
        const Vector z = permuted_analysis(id, code) * Vector{-0.4, -0.1, -0.3, -0.2};
        for (std::size_t i = 0; i < 3; ++i) CHECK(z[i] > 0.0);
    }
    CHECK_THROWS_AS(fpq_encode_v1(modulated_htf(2, 4), Composition({2, 1}), Vector{1, 0}), ShapeError);
}

TEST_CASE("canonical decoding") {
    std::mt19937_64 g(2);
    SUBCASE("orthonormal frame rotates the psc decode") {
        const frames::Frame f = frames::real_htf(4, 4);
        for (int t = 0; t < 50; ++t) {
            const Composition c = random_composition(g, 4);
            const InitialCodeword mu = random_mu(g, c.blocks(), Variant::I);
            const FpqCode code = fpq_encode_v1(f, c, gaussian(g, 4));
            const Vector a = canonical_decode(f, c, mu, code);
            const Vector b = f.analysis().transpose() * psc::decode(code, mu, c);
            for (std::size_t i = 0; i < 4; ++i) CHECK(std::abs(a[i] - b[i]) < 1e-12);
        }
    }
    SUBCASE("modulated HTF with M = N + 1 is always consistent") {
        const frames::Frame f = modulated_htf(4, 5);
        for (int t = 0; t < 2000; ++t) {
            const Composition c = random_composition(g, 5);
            const InitialCodeword mu = random_mu(g, c.blocks(), Variant::I);
            const FpqCode code = fpq_encode_v1(f, c, gaussian(g, 4));
            CHECK(consistency_system(f, c, code).check(canonical_decode(f, c, mu, code)) >= -1e-9);
        }
    }
    SUBCASE("M = N + 2 admits inconsistent canonical decodes") {
        const frames::Frame f = modulated_htf(4, 6);
        double worst = 0.0;
        for (int t = 0; t < 2000; ++t) {
            const Composition c = random_composition(g, 6);
            const InitialCodeword mu = random_mu(g, c.blocks(), Variant::I);
            const FpqCode code = fpq_encode_v1(f, c, gaussian(g, 4));
            worst = std::min(worst, consistency_system(f, c, code).check(canonical_decode(f, c, mu, code)));
        }
        CHECK(worst < -1e-6);
    }
    CHECK_THROWS_AS(canonical_decode(modulated_htf(2, 4), Composition({2, 2}), InitialCodeword({1, 0}, Variant::II),
                                     fpq_encode_v1(modulated_htf(2, 4), Composition({2, 2}), Vector{1, 0})),
                    ContractError);
}

TEST_CASE("consistency systems") {
    const frames::Frame f = modulated_htf(2, 4, -1);
    const Composition c({2, 2});
    FpqCode identity;
    identity.order = {0, 1, 2, 3};
    identity.signs = {1, 1, 1, 1};
    const Matrix printed{{1, -1}, {-kZeta, -1 - kZeta}, {1 - kZeta, kZeta}, {-2 * kZeta, 0}};
    CHECK(row_set(consistency_system(f, c, identity).b) == row_set(printed));

    std::mt19937_64 g(3);
    for (int t = 0; t < 200; ++t) {
        const Composition m = random_composition(g, 4);
        const Variant v = t % 2 ? Variant::II : Variant::I;
        const Vector x = gaussian(g, 2);
        const FpqCode code = fpq_encode(f, m, x, v);
        const ConsistencySystem s = cell_system(f, m, code);
        // a second point of the same cell; the segment between them stays inside
        for (int k = 0; k < 20; ++k) {
            const Vector x2 = gaussian(g, 2);
            if (!(fpq_encode(f, m, x2, v) == code)) continue;
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const double lam = u(g);
            Vector mix(2);
            for (std::size_t i = 0; i < 2; ++i) mix[i] = lam * x[i] + (1 - lam) * x2[i];
            CHECK(s.check(mix) >= -1e-12);
            CHECK(fpq_encode(f, m, mix, v) == code);
        }
    }
}

TEST_CASE("variant II: the uncoded block needs the closure rows") {
    const frames::Frame id = frames::identity_frame(2);
    const Composition c({1, 1});
    const FpqCode code = fpq_encode_v2(id, c, Vector{0.5, -0.8});
    const Vector other{-2.0, -1.0};
    CHECK_FALSE(fpq_encode_v2(id, c, other) == code);
    CHECK(consistency_system(id, c, code).check(other) >= 0.0);  // the defining inequalities alone admit it
    CHECK(cell_system(id, c, code).check(other) < 0.0);
}

TEST_CASE("every point lies in exactly one cell") {
    std::mt19937_64 g(4);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    const frames::Frame f = modulated_htf(2, 4);
    for (const Composition& m : {Composition({2, 2}), Composition({1, 2, 1}), Composition({1, 1, 1, 1})}) {
        for (Variant v : {Variant::I, Variant::II}) {
            const std::vector<FpqCode> codes = all_codes(m, v);
            CHECK(codes.size() == psc::codebook_size(m, v, true));
            std::vector<ConsistencySystem> cells;
            for (const auto& code : codes) cells.push_back(cell_system(f, m, code));
            for (int t = 0; t < 500; ++t) {
                const Vector x{u(g), u(g)};
                int inside = 0;
                for (const auto& s : cells) inside += s.check(x) > 0.0;
                CHECK(inside == 1);
            }
        }
    }
}

TEST_CASE("fpq rates") {
    CHECK(std::abs(fpq_rate(Composition({2, 2}), Variant::I, 2) - std::log2(6.0) / 2.0) < 1e-15);
    CHECK(std::abs(fpq_rate(Composition({2, 2}), Variant::I, 2) - 1.2925) < 1e-4);
    CHECK(fpq_rate(Composition({4}), Variant::I, 2) == 0.0);
    CHECK(std::abs(fpq_rate(Composition({2, 2}), Variant::II, 2) - 2.2925) < 1e-4);
    CHECK_THROWS_AS(fpq_rate(Composition({2, 2}), Variant::I, 5), ShapeError);
}

TEST_CASE("cell census for (N, M) = (2, 4), m = (2, 2)") {
    const frames::Frame f = modulated_htf(2, 4, -1);
    const Composition c({2, 2});
    const std::vector<FpqCode> codes = all_codes(c, Variant::I);
    REQUIRE(codes.size() == 6);
    std::vector<std::vector<std::size_t>> empty_tops;
    for (const FpqCode& code : codes)
        if (!cell_has_interior(f, c, code)) empty_tops.push_back({code.order[0], code.order[1]});
    CHECK(empty_tops.size() == 2);
    const std::set<std::vector<std::size_t>> expected{{0, 1}, {2, 3}};
    CHECK(std::set<std::vector<std::size_t>>(empty_tops.begin(), empty_tops.end()) == expected);
    CHECK(cell_has_interior(f, c, fpq_encode_v1(f, c, Vector{1, 0})));
}

TEST_CASE("linear reconstruction theorem probes") {
    SUBCASE("canonical dual of the codimension-one modulated HTF") {
        const frames::Frame f = modulated_htf(4, 5);
        const auto rep = check_linear_reconstruction_theorem(f, f.pseudo_inverse(), Variant::I, 3000, 1);
        CHECK(rep.form_holds);
        CHECK(rep.violations == 0);
        CHECK(std::abs(rep.scale_a - 1.0) < 1e-9);
    }
    SUBCASE("basis with scaled inverse, Variant II") {
        std::mt19937_64 g(5);
        Matrix a(4, 4);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j) a(i, j) = gaussian(g, 1)[0];
        const frames::Frame f(a);
        const auto rep = check_linear_reconstruction_theorem(f, 2.0 * numkit::inverse(a), Variant::II, 3000, 2);
        CHECK(rep.form_holds);
        CHECK(std::abs(rep.scale_a - 2.0) < 1e-9);
        CHECK(rep.violations == 0);
    }
    SUBCASE("redundant frames fail the Variant II form") {
        const frames::Frame f = modulated_htf(4, 5);
        const auto rep = check_linear_reconstruction_theorem(f, f.pseudo_inverse(), Variant::II, 2000, 3);
        CHECK_FALSE(rep.form_holds);
        CHECK(rep.violations > 0);
    }
    SUBCASE("M = N + 2 fails and the probe finds a witness") {
        const frames::Frame f = modulated_htf(4, 6);
        const auto rep = check_linear_reconstruction_theorem(f, f.pseudo_inverse(), Variant::I, 3000, 4);
        CHECK_FALSE(rep.form_holds);
        CHECK(rep.violations > 0);
        REQUIRE(rep.worst.has_value());
        CHECK(rep.worst->margin < -1e-6);
        // replay the witness
        const InitialCodeword mu(rep.worst->mu, Variant::I);
        const FpqCode code = fpq_encode_v1(f, rep.worst->m, rep.worst->x);
        const double margin = consistency_system(f, rep.worst->m, code).check(canonical_decode(f, rep.worst->m, mu, code));
        CHECK(margin == doctest::Approx(rep.worst->margin).epsilon(1e-9));
    }
    CHECK_THROWS_AS(check_linear_reconstruction_theorem(modulated_htf(2, 4), Matrix(4, 2), Variant::I, 1, 1),
                    ShapeError);
}

TEST_CASE("bitstream") {
    std::mt19937_64 g(6);
    for (int t = 0; t < 200; ++t) {
        const std::size_t mm = 3 + t % 8, n = 2 + t % 2;
        const frames::Frame f = modulated_htf(n, mm);
        const Composition c = random_composition(g, mm);
        const Variant v = t % 2 ? Variant::II : Variant::I;
        const FpqCode code = fpq_encode(f, c, gaussian(g, n), v);
        const Packed p = pack(code, c);
        CHECK(p.payload_bits == std::size_t(std::ceil(fpq_rate(c, v, n) * double(n) - 1e-12)));
        const Unpacked u = unpack(p.bytes);
        CHECK(u.m == c);
        CHECK(u.code == code);
    }
    std::vector<std::uint8_t> junk{3, 4, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(unpack(junk), ContractError);
    CHECK_THROWS_AS(unpack({1, 2}), ShapeError);
}
