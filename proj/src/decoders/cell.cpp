#include <cmath>
#include <numbers>

#include "fpq/decoders.hpp"
#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/lp.hpp"
#include "fpq/numkit/qp.hpp"

namespace fpq::decoders {

DecodeResult lp_decode_uniform(const Frame& f, const Composition& m, const FpqCode& code) {
    const quant::ConsistencySystem cell = quant::cell_system(f, m, code);
    const std::size_t rows = cell.b.rows(), n = f.dimension();
    // (x, delta):  -B x + delta <= 0,  -x + delta <= 1/2,  x + delta <= 1/2
    Matrix a(rows + 2 * n, n + 1);
    Vector b(rows + 2 * n, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = -cell.b(i, j);
        a(i, n) = 1.0;
    }
    for (std::size_t j = 0; j < n; ++j) {
        a(rows + j, j) = -1.0;
        a(rows + j, n) = 1.0;
        b[rows + j] = 0.5;
        a(rows + n + j, j) = 1.0;
        a(rows + n + j, n) = 1.0;
        b[rows + n + j] = 0.5;
    }
    Vector c(n + 1, 0.0);
    c[n] = -1.0;
    const numkit::LpResult r = numkit::solve_lp({c, a, b});
    if (r.status != numkit::LpStatus::Optimal)
        throw ContractError("lp_decode_uniform: LP " + std::string(numkit::to_string(r.status)));
    DecodeResult out;
    out.estimate.assign(r.z.begin(), r.z.begin() + static_cast<std::ptrdiff_t>(n));
    out.slack = r.z[n];
    out.margin = cell.check(out.estimate);
    out.degenerate = out.slack <= 1e-9;
    out.solver_iterations = r.iterations;
    return out;
}

double mean_gaussian_norm(std::size_t n) {
    if (n == 0) throw ShapeError("mean_gaussian_norm: N must be positive");
    // ratio(N) = Gamma((N+1)/2) / Gamma(N/2); ratio(N+2) = ratio(N) (N+1)/N
    double ratio = n % 2 == 1 ? 1.0 / std::sqrt(std::numbers::pi) : std::sqrt(std::numbers::pi) / 2.0;
    for (std::size_t k = n % 2 == 1 ? 1 : 2; k < n; k += 2) ratio *= double(k + 1) / double(k);
    return std::numbers::sqrt2 * ratio;
}

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

DecodeResult qp_decode_gaussian(const Frame& f, const Composition& m, const FpqCode& code) {
    const quant::ConsistencySystem cell = quant::cell_system(f, m, code);
    const std::size_t rows = cell.b.rows(), n = f.dimension();
    DecodeResult out;
    if (rows == 0) {
        // No constraints: the code carries no angular information.
        out.estimate.assign(n, 0.0);
        out.margin = cell.check(out.estimate);
        return out;
    }
    // (x, delta): min 1/2 |x|^2 - delta  s.t.  -B x + delta <= 0
    Matrix h(n + 1, n + 1);
    for (std::size_t j = 0; j < n; ++j) h(j, j) = 1.0;
    Matrix a(rows, n + 1);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < n; ++j) a(i, j) = -cell.b(i, j);
        a(i, n) = 1.0;
    }
    Vector c(n + 1, 0.0);
    c[n] = -1.0;
    const numkit::QpResult r = numkit::solve_qp({h, c, a, Vector(rows, 0.0)});
    Vector ang(r.z.begin(), r.z.begin() + static_cast<std::ptrdiff_t>(n));
    const double len = numkit::norm(ang);
    double row_scale = 1.0;
    for (std::size_t i = 0; i < rows; ++i) row_scale = std::max(row_scale, numkit::norm(cell.b.row(i)));
    out.solver_iterations = r.iterations;
    out.slack = r.z[n];
    if (len <= 1e-9 * row_scale) {
        out.degenerate = true;
        out.estimate.assign(n, 0.0);
        out.margin = cell.check(out.estimate);
        return out;
    }
    const double target = mean_gaussian_norm(n);
    out.estimate.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.estimate[j] = target * ang[j] / len;
    out.margin = cell.check(out.estimate);
    return out;
}

}  // namespace fpq::decoders
