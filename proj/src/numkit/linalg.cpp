#include "fpq/numkit/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fpq/numkit/errors.hpp"

namespace fpq::numkit {

namespace {

constexpr double kRankTolerance = 1e-10;
constexpr double kSymmetryTolerance = 1e-12;

struct LuFactors {
    Matrix lu;
    std::vector<std::size_t> pivots;
};

LuFactors lu_factor(const Matrix& a) {
    if (a.rows() != a.cols()) throw ShapeError("LU: matrix is not square");
    const std::size_t n = a.rows();
    LuFactors f{a, std::vector<std::size_t>(n)};
    std::iota(f.pivots.begin(), f.pivots.end(), 0);
    const double scale = std::max(max_abs(a), 1e-300);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        for (std::size_t i = k + 1; i < n; ++i)
            if (std::abs(f.lu(i, k)) > std::abs(f.lu(p, k))) p = i;
        if (std::abs(f.lu(p, k)) <= 1e-14 * scale) throw RankError("LU: matrix is singular");
        if (p != k) {
            for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(p, j));
            std::swap(f.pivots[k], f.pivots[p]);
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const double l = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = l;
            if (l == 0.0) continue;
            for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
        }
    }
    return f;
}

Vector lu_solve(const LuFactors& f, std::span<const double> b) {
    const std::size_t n = f.lu.rows();
    Vector x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = b[f.pivots[i]];
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

}  // namespace

Matrix gram(const Matrix& f) {
    Matrix g(f.cols(), f.cols());
    for (std::size_t i = 0; i < f.cols(); ++i) {
        for (std::size_t j = i; j < f.cols(); ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < f.rows(); ++k) s += f(k, i) * f(k, j);
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

Vector solve_linear(const Matrix& a, std::span<const double> b) {
    if (a.rows() != b.size()) throw ShapeError("solve_linear: right-hand side length mismatch");
    return lu_solve(lu_factor(a), b);
}

Matrix inverse(const Matrix& a) {
    const auto f = lu_factor(a);
    const std::size_t n = a.rows();
    Matrix inv(n, n);
    Vector e(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        std::fill(e.begin(), e.end(), 0.0);
        e[j] = 1.0;
        const Vector col = lu_solve(f, e);
        for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
    }
    return inv;
}

Matrix pseudo_inverse(const Matrix& f) {
    const std::size_t m = f.rows();
    const std::size_t n = f.cols();
    if (m < n || n == 0) throw ShapeError("pseudo_inverse: need rows >= cols >= 1");

    const Vector eig = symmetric_eigenvalues(gram(f));
    if (eig.back() <= 0.0 || eig.front() <= kRankTolerance * eig.back())
        throw RankError("pseudo_inverse: matrix does not have full column rank");

    // Householder QR: R overwrites the upper triangle of qr, reflectors kept in vs.
    Matrix qr = f;
    std::vector<Vector> vs(n);
    for (std::size_t k = 0; k < n; ++k) {
        double alpha = 0.0;
        for (std::size_t i = k; i < m; ++i) alpha += qr(i, k) * qr(i, k);
        alpha = std::sqrt(alpha);
        if (qr(k, k) > 0) alpha = -alpha;
        Vector v(m - k);
        for (std::size_t i = k; i < m; ++i) v[i - k] = qr(i, k);
        v[0] -= alpha;
        const double vnorm2 = dot(v, v);
        if (vnorm2 > 0.0) {
            for (std::size_t j = k; j < n; ++j) {
                double s = 0.0;
                for (std::size_t i = k; i < m; ++i) s += v[i - k] * qr(i, j);
                s = 2.0 * s / vnorm2;
                for (std::size_t i = k; i < m; ++i) qr(i, j) -= s * v[i - k];
            }
        }
        vs[k] = std::move(v);
    }

    // Q^T applied to the identity, then back-substitute R X = (Q^T)_{1:n,:}.
    Matrix qt = Matrix::identity(m);
    for (std::size_t k = 0; k < n; ++k) {
        const Vector& v = vs[k];
        const double vnorm2 = dot(v, v);
        if (vnorm2 == 0.0) continue;
        for (std::size_t j = 0; j < m; ++j) {
            double s = 0.0;
            for (std::size_t i = k; i < m; ++i) s += v[i - k] * qt(i, j);
            s = 2.0 * s / vnorm2;
            for (std::size_t i = k; i < m; ++i) qt(i, j) -= s * v[i - k];
        }
    }
    Matrix g(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = n; i-- > 0;) {
            double s = qt(i, j);
            for (std::size_t l = i + 1; l < n; ++l) s -= qr(i, l) * g(l, j);
            g(i, j) = s / qr(i, i);
        }
    }
    return g;
}

SymmetricEigen symmetric_eigen(const Matrix& s) {
    if (s.rows() != s.cols()) throw ShapeError("symmetric_eigen: matrix is not square");
    const std::size_t n = s.rows();
    const double scale = std::max(max_abs(s), 1.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(s(i, j) - s(j, i)) > kSymmetryTolerance * scale)
                throw ShapeError("symmetric_eigen: matrix is not symmetric");

    Matrix a = s;
    Matrix v = Matrix::identity(n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off <= 1e-32 * scale * scale) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });
    SymmetricEigen out{Vector(n), Matrix(n, n)};
    for (std::size_t j = 0; j < n; ++j) {
        out.values[j] = a(idx[j], idx[j]);
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, idx[j]);
    }
    return out;
}

Vector symmetric_eigenvalues(const Matrix& s) { return symmetric_eigen(s).values; }

}  // namespace fpq::numkit
