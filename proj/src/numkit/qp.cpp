#include "fpq/numkit/qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/linalg.hpp"

namespace fpq::numkit {

namespace {

constexpr double kSigma = 1e-6;
constexpr double kAlpha = 1.6;
constexpr double kPolishReg = 1e-9;

// Lower Cholesky factor of a symmetric positive definite matrix.
Matrix cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    Matrix l(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (d <= 0.0) throw RankError("cholesky: matrix is not positive definite");
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    return l;
}

Vector cholesky_solve(const Matrix& l, Vector b) {
    const std::size_t n = l.rows();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < i; ++k) b[i] -= l(i, k) * b[k];
        b[i] /= l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; ++k) b[i] -= l(k, i) * b[k];
        b[i] /= l(i, i);
    }
    return b;
}

Vector transpose_times(const Matrix& a, std::span<const double> y) {
    Vector out(a.cols(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (y[i] == 0.0) continue;
        for (std::size_t j = 0; j < a.cols(); ++j) out[j] += a(i, j) * y[i];
    }
    return out;
}

struct Assessment {
    double violation = 0.0;
    double stationarity = 0.0;
    double complementarity = 0.0;
};

Assessment assess(const QpProblem& p, std::span<const double> z, std::span<const double> y) {
    Assessment a;
    const std::size_t m = p.constraints.rows();
    Vector grad = p.quadratic * z;
    for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += p.linear[j];
    if (m > 0) {
        const Vector aty = transpose_times(p.constraints, y);
        for (std::size_t j = 0; j < grad.size(); ++j) grad[j] += aty[j];
    }
    a.stationarity = norm_inf(grad);
    a.violation = m == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
        const double slack = p.bounds[i] - dot(p.constraints.row(i), z);
        a.violation = std::max(a.violation, -slack);
        a.complementarity = std::max(a.complementarity, std::abs(y[i] * slack));
    }
    return a;
}

struct Polished {
    Vector z;
    Vector y;
};

// Solve the equality-constrained QP on `active` rows via a regularized KKT
// system with iterative refinement toward the unregularized one.
Polished polish(const QpProblem& p, const std::vector<std::size_t>& active, std::span<const double> z0) {
    const std::size_t n = p.linear.size();
    const std::size_t k = active.size();
    const std::size_t dim = n + k;
    Matrix kkt(dim, dim);
    Matrix kkt_reg(dim, dim);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) kkt(i, j) = p.quadratic(i, j);
    for (std::size_t r = 0; r < k; ++r) {
        for (std::size_t j = 0; j < n; ++j) {
            kkt(n + r, j) = p.constraints(active[r], j);
            kkt(j, n + r) = p.constraints(active[r], j);
        }
    }
    kkt_reg = kkt;
    for (std::size_t i = 0; i < n; ++i) kkt_reg(i, i) += kPolishReg;
    for (std::size_t r = 0; r < k; ++r) kkt_reg(n + r, n + r) -= kPolishReg;

    Vector rhs(dim);
    for (std::size_t i = 0; i < n; ++i) rhs[i] = -p.linear[i];
    for (std::size_t r = 0; r < k; ++r) rhs[n + r] = p.bounds[active[r]];

    Vector t(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) t[i] = z0[i];
    for (int iter = 0; iter < 25; ++iter) {
        const Vector kt = kkt * t;
        Vector res(dim);
        for (std::size_t i = 0; i < dim; ++i) res[i] = rhs[i] - kt[i];
        if (norm_inf(res) < 1e-15 * (1.0 + norm_inf(rhs))) break;
        const Vector dt = solve_linear(kkt_reg, res);
        for (std::size_t i = 0; i < dim; ++i) t[i] += dt[i];
    }
    Polished out{Vector(t.begin(), t.begin() + static_cast<std::ptrdiff_t>(n)),
                 Vector(p.constraints.rows(), 0.0)};
    for (std::size_t r = 0; r < k; ++r) out.y[active[r]] = t[n + r];
    return out;
}

void validate(const QpProblem& p) {
    const std::size_t n = p.linear.size();
    if (p.quadratic.rows() != n || p.quadratic.cols() != n)
        throw ShapeError("solve_qp: quadratic term must be n x n");
    if (p.constraints.rows() != p.bounds.size())
        throw ShapeError("solve_qp: bound length differs from constraint rows");
    if (p.constraints.rows() > 0 && p.constraints.cols() != n)
        throw ShapeError("solve_qp: constraint columns differ from variable count");
    const Vector eig = symmetric_eigenvalues(p.quadratic);  // throws on asymmetry
    if (!eig.empty() && eig.front() < -1e-10)
        throw ContractError("solve_qp: quadratic term is not positive semidefinite");
}

}  // namespace

QpResult solve_qp(const QpProblem& p, const QpOptions& opt) {
    validate(p);
    const std::size_t n = p.linear.size();
    const std::size_t m = p.constraints.rows();
    const Matrix& a = p.constraints;

    double rho = 0.1;
    auto factor = [&](double r) {
        Matrix k = p.quadratic;
        for (std::size_t i = 0; i < n; ++i) k(i, i) += kSigma;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t u = 0; u < n; ++u) {
                const double aiu = a(i, u);
                if (aiu == 0.0) continue;
                for (std::size_t v = 0; v < n; ++v) k(u, v) += r * aiu * a(i, v);
            }
        return cholesky(k);
    };
    Matrix chol = factor(rho);

    Vector x(n, 0.0);
    Vector w(m);
    Vector y(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) w[i] = std::min(0.0, p.bounds[i]);

    double scale = 1.0;
    for (double v : p.linear) scale = std::max(scale, std::abs(v));
    for (double v : p.bounds) scale = std::max(scale, std::abs(v));
    double admm_tol = 1e-5;
    double last_residual = std::numeric_limits<double>::infinity();

    auto try_accept = [&](Vector z, Vector yy, bool polished, int iters) -> std::optional<QpResult> {
        for (double& v : yy) v = std::max(v, 0.0);
        const Assessment s = assess(p, z, yy);
        if (s.violation > opt.feasibility_tol * scale) return std::nullopt;
        const double kkt = std::max(s.stationarity, s.complementarity);
        if (kkt > (polished ? std::max(1e-9 * scale, 1e-3 * opt.kkt_tol) : opt.kkt_tol)) return std::nullopt;
        QpResult r;
        r.objective = 0.5 * dot(z, p.quadratic * z) + dot(p.linear, z);
        r.z = std::move(z);
        r.multipliers = std::move(yy);
        r.kkt_residual = kkt;
        r.max_violation = s.violation;
        r.iterations = iters;
        r.polished = polished;
        return r;
    };

    for (int it = 1; it <= opt.max_iterations; ++it) {
        Vector rhs(n);
        for (std::size_t j = 0; j < n; ++j) rhs[j] = kSigma * x[j] - p.linear[j];
        if (m > 0) {
            Vector t(m);
            for (std::size_t i = 0; i < m; ++i) t[i] = rho * w[i] - y[i];
            const Vector at = transpose_times(a, t);
            for (std::size_t j = 0; j < n; ++j) rhs[j] += at[j];
        }
        const Vector xt = cholesky_solve(chol, std::move(rhs));
        const Vector wt = m > 0 ? a * xt : Vector{};
        for (std::size_t j = 0; j < n; ++j) x[j] = kAlpha * xt[j] + (1.0 - kAlpha) * x[j];
        for (std::size_t i = 0; i < m; ++i) {
            const double wr = kAlpha * wt[i] + (1.0 - kAlpha) * w[i];
            const double wn = std::min(wr + y[i] / rho, p.bounds[i]);
            y[i] += rho * (wr - wn);
            w[i] = wn;
        }

        if (it % 10 != 0) continue;

        const Vector ax = m > 0 ? a * x : Vector{};
        double r_prim = 0.0, ax_norm = 0.0, w_norm = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            r_prim = std::max(r_prim, std::abs(ax[i] - w[i]));
            ax_norm = std::max(ax_norm, std::abs(ax[i]));
            w_norm = std::max(w_norm, std::abs(w[i]));
        }
        Vector grad = p.quadratic * x;
        const Vector hx_copy = grad;
        Vector aty = m > 0 ? transpose_times(a, y) : Vector(n, 0.0);
        for (std::size_t j = 0; j < n; ++j) grad[j] += p.linear[j] + aty[j];
        const double r_dual = norm_inf(grad);
        last_residual = std::max(r_prim, r_dual);

        const double prim_scale = std::max({ax_norm, w_norm, 1e-12});
        const double dual_scale = std::max({norm_inf(hx_copy), norm_inf(aty), norm_inf(p.linear), 1e-12});

        if (r_prim <= admm_tol * (1.0 + prim_scale) && r_dual <= admm_tol * (1.0 + dual_scale)) {
            // Candidate active sets: positive multipliers, then also near-tight rows.
            std::vector<std::size_t> active;
            double ymax = 0.0;
            for (double v : y) ymax = std::max(ymax, v);
            for (std::size_t i = 0; i < m; ++i)
                if (y[i] > 1e-7 * std::max(ymax, 1.0)) active.push_back(i);
            std::vector<std::size_t> widened = active;
            for (std::size_t i = 0; i < m; ++i)
                if (ax[i] >= p.bounds[i] - 1e-7 * (1.0 + std::abs(p.bounds[i])) &&
                    std::find(active.begin(), active.end(), i) == active.end())
                    widened.push_back(i);
            std::sort(widened.begin(), widened.end());
            for (const auto* cand : {&active, &widened}) {
                try {
                    Polished pol = polish(p, *cand, x);
                    if (auto r = try_accept(std::move(pol.z), std::move(pol.y), true, it)) return *r;
                } catch (const RankError&) {
                }
            }
            if (auto r = try_accept(x, y, false, it)) return *r;
            admm_tol = std::max(admm_tol * 0.1, 1e-13);
        }

        if (it % 50 == 0 && m > 0 && r_prim > 0.0 && r_dual > 0.0) {
            const double ratio = std::sqrt((r_prim / prim_scale) / (r_dual / dual_scale));
            const double new_rho = std::clamp(rho * ratio, 1e-6, 1e6);
            if (new_rho > 5.0 * rho || new_rho < 0.2 * rho) {
                rho = new_rho;
                chol = factor(rho);
            }
        }
    }
    throw SolverStall("solve_qp: iteration cap exceeded", x, last_residual);
}

}  // namespace fpq::numkit
