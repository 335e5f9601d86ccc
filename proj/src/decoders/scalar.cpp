#include <algorithm>
#include <cmath>
#include <limits>

#include "fpq/decoders.hpp"
#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/lp.hpp"

namespace fpq::decoders {

QuantizedExpansion quantize(const Matrix& analysis, double step, std::span<const double> x) {
    if (!(step > 0.0)) throw ContractError("quantize: step must be positive");
    if (x.size() != analysis.cols()) throw ShapeError("quantize: source length differs from N");
    QuantizedExpansion q{analysis, step, analysis * x};
    for (double& v : q.coefficients) v = step * std::round(v / step);
    return q;
}

double interval_margin(const QuantizedExpansion& q, std::span<const double> x) {
    const Vector y = q.analysis * x;
    double lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < y.size(); ++k) lo = std::min(lo, 0.5 * q.step - std::abs(y[k] - q.coefficients[k]));
    return lo;
}

DecodeResult lp_decode_sq(const QuantizedExpansion& q) {
    const std::size_t m = q.analysis.rows(), n = q.analysis.cols();
    if (q.coefficients.size() != m) throw ShapeError("lp_decode_sq: coefficient count differs from M");
    // (x, delta):  F x + delta <= y + D/2,  -F x + delta <= D/2 - y
    Matrix a(2 * m, n + 1);
    Vector b(2 * m);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            a(k, j) = q.analysis(k, j);
            a(m + k, j) = -q.analysis(k, j);
        }
        a(k, n) = 1.0;
        a(m + k, n) = 1.0;
        b[k] = q.coefficients[k] + 0.5 * q.step;
        b[m + k] = 0.5 * q.step - q.coefficients[k];
    }
    Vector c(n + 1, 0.0);
    c[n] = -1.0;
    const numkit::LpResult r = numkit::solve_lp({c, a, b});
    if (r.status != numkit::LpStatus::Optimal)
        throw ContractError("lp_decode_sq: LP " + std::string(numkit::to_string(r.status)));
    DecodeResult out;
    out.estimate.assign(r.z.begin(), r.z.begin() + static_cast<std::ptrdiff_t>(n));
    out.slack = r.z[n];
    out.margin = interval_margin(q, out.estimate);
    out.solver_iterations = r.iterations;
    return out;
}

DecodeResult recursive_decode_sq(const QuantizedExpansion& q, const std::vector<std::size_t>& checkpoints,
                                 std::vector<Vector>* snapshots) {
    const std::size_t m = q.analysis.rows(), n = q.analysis.cols();
    if (q.coefficients.size() != m) throw ShapeError("recursive_decode_sq: coefficient count differs from M");
    Vector x(n, 0.0);
    DecodeResult out;
    std::size_t next = 0;
    for (std::size_t k = 0; k < m; ++k) {
        const auto phi = q.analysis.row(k);
        const double ip = numkit::dot(x, phi);
        const double nrm2 = numkit::dot(phi, phi);
        double target = ip;
        if (ip < q.coefficients[k] - 0.5 * q.step) target = q.coefficients[k] - 0.5 * q.step;
        else if (ip > q.coefficients[k] + 0.5 * q.step) target = q.coefficients[k] + 0.5 * q.step;
        if (target != ip && nrm2 > 0.0) {
            const double s = (target - ip) / nrm2;
            for (std::size_t j = 0; j < n; ++j) x[j] += s * phi[j];
            ++out.projections;
        }
        while (snapshots && next < checkpoints.size() && checkpoints[next] == k + 1) {
            snapshots->push_back(x);
            ++next;
        }
    }
    out.estimate = x;
    out.margin = interval_margin(q, x);
    return out;
}

}  // namespace fpq::decoders
