#include <algorithm>
#include <limits>

#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/lp.hpp"
#include "fpq/quant.hpp"

namespace fpq::quant {

std::size_t difference_rows(const Composition& m) {
    std::size_t l = 0;
    for (std::size_t i = 0; i + 1 < m.blocks(); ++i) l += m[i] * m[i + 1];
    return l;
}

Matrix difference_matrix(const Composition& m) {
    Matrix d(difference_rows(m), m.total());
    std::size_t r = 0;
    for (std::size_t i = 0; i + 1 < m.blocks(); ++i) {
        for (std::size_t l = m.start(i + 1); l < m.start(i + 1) + m[i + 1]; ++l) {
            for (std::size_t k = m.start(i); k < m.start(i) + m[i]; ++k, ++r) {
                d(r, k) = 1.0;
                d(r, l) = -1.0;
            }
        }
    }
    return d;
}

Matrix extended_difference_matrix(const Composition& m) {
    if (m.blocks() < 2) throw ContractError("extended_difference_matrix: needs K >= 2");
    const std::size_t km1 = m.blocks() - 2;
    Matrix sel(m[km1], m.total());
    for (std::size_t k = 0; k < m[km1]; ++k) sel(k, m.start(km1) + k) = 1.0;
    return numkit::vstack(difference_matrix(m), sel);
}

double ConsistencySystem::check(std::span<const double> x) const {
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.rows(); ++i) lo = std::min(lo, numkit::dot(b.row(i), x));
    return lo;
}

namespace {

void check_shapes(const Frame& f, const Composition& m, const FpqCode& code) {
    if (m.total() != f.size()) throw ShapeError("consistency: composition total differs from M");
    if (code.order.size() != f.size()) throw ShapeError("consistency: code length differs from M");
}

}  // namespace

ConsistencySystem consistency_system(const Frame& f, const Composition& m, const FpqCode& code) {
    check_shapes(f, m, code);
    const Matrix pf = permuted_analysis(f, code);
    if (code.variant == Variant::I) return {difference_matrix(m) * pf};
    if (m.blocks() < 2) return {Matrix(0, f.dimension())};
    return {extended_difference_matrix(m) * pf};
}

ConsistencySystem cell_system(const Frame& f, const Composition& m, const FpqCode& code) {
    ConsistencySystem s = consistency_system(f, m, code);
    if (code.variant == Variant::I || m.blocks() < 2) return s;
    const std::size_t km1 = m.blocks() - 2, kk = m.blocks() - 1;
    Matrix closure(m[km1] * m[kk], m.total());
    std::size_t r = 0;
    for (std::size_t l = m.start(kk); l < m.total(); ++l)
        for (std::size_t k = m.start(km1); k < m.start(km1) + m[km1]; ++k, ++r) {
            closure(r, k) = 1.0;
            closure(r, l) = 1.0;
        }
    s.b = numkit::vstack(s.b, closure * permuted_analysis(f, code));
    return s;
}

double cell_interior_margin(const ConsistencySystem& s, std::size_t n) {
    const std::size_t rows = s.b.rows();
    if (rows == 0) return 1.0;
    // variables (x, delta): -B x + delta <= 0, +-x_i <= 1, delta <= 1
    Matrix a(rows + 2 * n + 1, n + 1);
    numkit::Vector b(a.rows(), 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = -s.b(i, j);
        a(i, n) = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        a(rows + 2 * j, j) = 1.0;
        b[rows + 2 * j] = 1.0;
        a(rows + 2 * j + 1, j) = -1.0;
        b[rows + 2 * j + 1] = 1.0;
    }
    a(rows + 2 * n, n) = 1.0;
    b[rows + 2 * n] = 1.0;
    numkit::Vector c(n + 1, 0.0);
    c[n] = -1.0;
    const numkit::LpResult r = numkit::solve_lp({c, a, b});
    if (r.status != numkit::LpStatus::Optimal) throw ContractError("cell_interior_margin: LP not optimal");
    return r.z[n];
}

bool cell_has_interior(const Frame& f, const Composition& m, const FpqCode& code) {
    return cell_interior_margin(cell_system(f, m, code), f.dimension()) > 1e-9;
}

}  // namespace fpq::quant
