#include <algorithm>
#include <cmath>

#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/rng.hpp"
#include "fpq/quant.hpp"

namespace fpq::quant {

namespace {

constexpr double kFormTol = 1e-9;

// Fit A = a I + J with J column-constant; returns (a, residual).
std::pair<double, double> fit_identity_plus_column_constant(const Matrix& a) {
    const std::size_t m = a.rows();
    Vector col(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (m == 1) break;
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (i != j) s += a(i, j);
        col[j] = s / double(m - 1);
    }
    double scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) scale += a(j, j) - col[j];
    scale /= double(m);
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            const double target = col[j] + (i == j ? scale : 0.0);
            residual = std::max(residual, std::abs(a(i, j) - target));
        }
    return {scale, residual};
}

std::pair<double, double> fit_scaled_identity(const Matrix& a) {
    const std::size_t m = a.rows();
    double scale = 0.0;
    for (std::size_t j = 0; j < m; ++j) scale += a(j, j);
    scale /= double(m);
    double residual = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) residual = std::max(residual, std::abs(a(i, j) - (i == j ? scale : 0.0)));
    return {scale, residual};
}

Vector random_initial_values(numkit::Rng& rng, std::size_t k, Variant v) {
    for (;;) {
        Vector mu = rng.standard_gaussian(k);
        if (v == Variant::II)
            for (double& x : mu) x = std::abs(x);
        std::sort(mu.begin(), mu.end(), std::greater<>());
        bool strict = true;
        for (std::size_t i = 1; i < k; ++i)
            if (!(mu[i - 1] > mu[i])) strict = false;
        if (strict) return mu;
    }
}

}  // namespace

LinearReconstructionReport check_linear_reconstruction_theorem(const Frame& f, const Matrix& r, Variant v,
                                                               std::size_t trials, std::uint64_t seed,
                                                               double tolerance) {
    const std::size_t m_size = f.size(), n = f.dimension();
    if (r.rows() != n || r.cols() != m_size) throw ShapeError("theorem check: R must be N x M");
    LinearReconstructionReport rep;
    const Matrix a = f.analysis() * r;
    const auto [scale, residual] =
        v == Variant::I ? fit_identity_plus_column_constant(a) : fit_scaled_identity(a);
    rep.scale_a = scale;
    rep.form_residual = residual;
    rep.form_holds = residual <= kFormTol && scale >= -kFormTol && (v == Variant::I || m_size == n);

    numkit::Rng rng(seed);
    const std::uint64_t ids = m_size >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << (m_size - 1));
    for (std::size_t t = 0; t < trials; ++t) {
        const Composition m = Composition::from_id(m_size, std::uniform_int_distribution<std::uint64_t>(0, ids - 1)(rng.engine()));
        const InitialCodeword mu(random_initial_values(rng, m.blocks(), v), v);
        const Vector x = rng.standard_gaussian(n);
        const FpqCode code = fpq_encode(f, m, x, v);
        const Vector xh = r * psc::decode(code, mu, m);
        const double margin = cell_system(f, m, code).check(xh);
        ++rep.trials;
        if (margin < -tolerance) ++rep.violations;
        if (margin < rep.worst_margin) {
            rep.worst_margin = margin;
            rep.worst = ReconstructionWitness{m, mu.values(), x, margin};
        }
    }
    return rep;
}

}  // namespace fpq::quant
