#include "fpq/numkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/linalg.hpp"

namespace fpq::numkit {

std::string_view to_string(LpStatus s) {
    switch (s) {
        case LpStatus::Optimal: return "optimal";
        case LpStatus::Infeasible: return "infeasible";
        case LpStatus::Unbounded: return "unbounded";
    }
    return "unknown";
}

namespace {

constexpr double kPivotTol = 1e-9;

// Equality-form tableau [T | rhs] with an explicit basis and a reduced-cost row.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows * (cols + 1), 0.0), basis_(rows) {}

    double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
    double at(std::size_t i, std::size_t j) const { return t_[i * (n_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, n_); }
    double rhs(std::size_t i) const { return at(i, n_); }

    std::size_t rows() const { return m_; }
    std::size_t cols() const { return n_; }
    std::vector<std::size_t>& basis() { return basis_; }

    // Reduced costs d = c - c_B^T T for the current basis.
    void price(const Vector& cost) {
        d_.assign(cost.begin(), cost.end());
        value_ = 0.0;
        for (std::size_t i = 0; i < m_; ++i) {
            const double cb = cost[basis_[i]];
            if (cb == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) d_[j] -= cb * at(i, j);
            value_ += cb * rhs(i);
        }
    }

    double value() const { return value_; }

    void pivot(std::size_t r, std::size_t col) {
        const double inv = 1.0 / at(r, col);
        for (std::size_t j = 0; j <= n_; ++j) at(r, j) *= inv;
        at(r, col) = 1.0;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, col);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
            at(i, col) = 0.0;
        }
        const double f = d_[col];
        if (f != 0.0) {
            for (std::size_t j = 0; j < n_; ++j) d_[j] -= f * at(r, j);
            d_[col] = 0.0;
            value_ += f * rhs(r);
        }
        basis_[r] = col;
    }

    enum class Outcome { Optimal, Unbounded };

    // Bland's rule: lowest-index improving column, ties in the ratio test go to
    // the lowest-index basic variable. `allowed` masks out columns.
    Outcome run(const std::vector<bool>& allowed, double cost_tol, int& iterations, int cap) {
        for (;;) {
            std::size_t enter = n_;
            for (std::size_t j = 0; j < n_; ++j) {
                if (allowed[j] && d_[j] < -cost_tol) {
                    enter = j;
                    break;
                }
            }
            if (enter == n_) return Outcome::Optimal;

            std::size_t leave = m_;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= kPivotTol) continue;
                const double ratio = std::max(rhs(i), 0.0) / a;
                const double tie = 1e-12 * (1.0 + std::abs(best));
                if (leave == m_ || ratio < best - tie) {
                    best = ratio;
                    leave = i;
                } else if (ratio <= best + tie && basis_[i] < basis_[leave]) {
                    leave = i;
                }
            }
            if (leave == m_) return Outcome::Unbounded;
            if (++iterations > cap) {
                throw SolverStall("solve_lp: iteration cap exceeded", {}, std::abs(value_));
            }
            pivot(leave, enter);
        }
    }

    void drop_row(std::size_t r) {
        t_.erase(t_.begin() + static_cast<std::ptrdiff_t>(r * (n_ + 1)),
                 t_.begin() + static_cast<std::ptrdiff_t>((r + 1) * (n_ + 1)));
        basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(r));
        --m_;
    }

private:
    std::size_t m_;
    std::size_t n_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
    Vector d_;
    double value_ = 0.0;
};

}  // namespace

LpResult solve_lp(const LpProblem& p, const LpOptions& opt) {
    const std::size_t m = p.constraints.rows();
    const std::size_t n = p.objective.size();
    if (p.bounds.size() != m) throw ShapeError("solve_lp: bound length differs from constraint rows");
    if (m > 0 && p.constraints.cols() != n) throw ShapeError("solve_lp: constraint columns differ from objective length");

    // Column layout: [z+ (n) | z- (n) | slack (m) | artificial (r)].
    std::vector<std::size_t> artificial_row;
    for (std::size_t i = 0; i < m; ++i)
        if (p.bounds[i] < 0.0) artificial_row.push_back(i);
    const std::size_t n_struct = 2 * n + m;
    const std::size_t n_cols = n_struct + artificial_row.size();

    Tableau tab(m, n_cols);
    // Original equality rows (after sign normalization) for the final basis solve.
    Matrix eq(m, n_cols);
    Vector eq_rhs(m);
    std::size_t next_art = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const double sign = p.bounds[i] < 0.0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < n; ++j) {
            eq(i, j) = sign * p.constraints(i, j);
            eq(i, n + j) = -sign * p.constraints(i, j);
        }
        eq(i, 2 * n + i) = sign;
        eq_rhs[i] = sign * p.bounds[i];
        if (sign < 0.0) {
            eq(i, n_struct + next_art) = 1.0;
            tab.basis()[i] = n_struct + next_art;
            ++next_art;
        } else {
            tab.basis()[i] = 2 * n + i;
        }
        for (std::size_t j = 0; j < n_cols; ++j) tab.at(i, j) = eq(i, j);
        tab.rhs(i) = eq_rhs[i];
    }

    const int cap = opt.max_iterations > 0 ? opt.max_iterations
                                           : static_cast<int>(2000 + 200 * (m + n_cols));
    const double cost_tol = opt.optimality_tol * 1e-2;
    LpResult result;
    std::vector<bool> allowed(n_cols, true);

    // Phase 1.
    if (!artificial_row.empty()) {
        Vector c1(n_cols, 0.0);
        for (std::size_t j = n_struct; j < n_cols; ++j) c1[j] = 1.0;
        tab.price(c1);
        tab.run(allowed, cost_tol, result.iterations, cap);
        double bscale = 1.0;
        for (double b : p.bounds) bscale = std::max(bscale, std::abs(b));
        if (tab.value() > opt.feasibility_tol * bscale) {
            result.status = LpStatus::Infeasible;
            return result;
        }
        // Pivot zero-level artificials out of the basis; drop redundant rows.
        for (std::size_t i = tab.rows(); i-- > 0;) {
            if (tab.basis()[i] < n_struct) continue;
            std::size_t col = n_struct;
            for (std::size_t j = 0; j < n_struct; ++j) {
                if (std::abs(tab.at(i, j)) > kPivotTol) {
                    col = j;
                    break;
                }
            }
            if (col < n_struct) {
                tab.pivot(i, col);
            } else {
                tab.drop_row(i);
            }
        }
        for (std::size_t j = n_struct; j < n_cols; ++j) allowed[j] = false;
    }

    // Phase 2.
    Vector c2(n_cols, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        c2[j] = p.objective[j];
        c2[n + j] = -p.objective[j];
    }
    tab.price(c2);
    if (tab.run(allowed, cost_tol, result.iterations, cap) == Tableau::Outcome::Unbounded) {
        result.status = LpStatus::Unbounded;
        return result;
    }

    // Read the basic solution, then refine it against the original rows.
    Vector full(n_cols, 0.0);
    const auto& basis = tab.basis();
    for (std::size_t i = 0; i < tab.rows(); ++i) full[basis[i]] = tab.rhs(i);
    if (tab.rows() == m && m > 0) {
        Matrix b_mat(m, m);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t k = 0; k < m; ++k) b_mat(i, k) = eq(i, basis[k]);
        try {
            const Vector xb = solve_linear(b_mat, eq_rhs);
            std::fill(full.begin(), full.end(), 0.0);
            for (std::size_t k = 0; k < m; ++k) full[basis[k]] = xb[k];
        } catch (const RankError&) {
            // keep tableau values
        }
    }

    result.status = LpStatus::Optimal;
    result.z.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) result.z[j] = full[j] - full[n + j];
    result.objective = dot(p.objective, result.z);
    result.max_violation = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i)
        result.max_violation =
            std::max(result.max_violation, dot(p.constraints.row(i), result.z) - p.bounds[i]);
    if (m == 0) result.max_violation = 0.0;
    return result;
}

}  // namespace fpq::numkit
