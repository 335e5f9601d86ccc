#include <algorithm>
#include <cmath>
#include <numbers>

#include "fpq/frames.hpp"
#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/linalg.hpp"
#include "fpq/numkit/rng.hpp"

namespace fpq::frames {

Frame::Frame(Matrix analysis) : f_(std::move(analysis)) {
    if (f_.cols() == 0) throw ShapeError("frame: dimension N must be positive");
    if (f_.rows() < f_.cols()) throw ShapeError("frame: need M >= N vectors");
    pinv_ = numkit::pseudo_inverse(f_);
}

Vector Frame::expand(std::span<const double> x) const {
    if (x.size() != dimension()) throw ShapeError("frame: source length differs from N");
    return f_ * x;
}

Frame real_htf(std::size_t n, std::size_t m) {
    if (n == 0 || m < n) throw ShapeError("real_htf: need M >= N >= 1");
    const double pi = std::numbers::pi;
    const double scale = std::sqrt(2.0 / double(n));
    const std::size_t half = n / 2;
    Matrix f(m, n);
    for (std::size_t k = 0; k < m; ++k) {
        if (n % 2 == 0) {
            for (std::size_t i = 1; i <= half; ++i) {
                const double a = double(2 * i - 1) * double(k) * pi / double(m);
                f(k, i - 1) = scale * std::cos(a);
                f(k, half + i - 1) = scale * std::sin(a);
            }
        } else {
            f(k, 0) = scale / std::sqrt(2.0);
            for (std::size_t i = 1; i <= half; ++i) {
                const double a = double(2 * i) * double(k) * pi / double(m);
                f(k, i) = scale * std::cos(a);
                f(k, half + i) = scale * std::sin(a);
            }
        }
    }
    return Frame(std::move(f));
}

Frame modulated_htf(std::size_t n, std::size_t m, int gamma) {
    if (gamma != 1 && gamma != -1) throw ContractError("modulated_htf: gamma must be +1 or -1");
    Matrix f = real_htf(n, m).analysis();
    for (std::size_t r = 0; r < m; ++r) {
        // 1-based row index k = r + 1, factor gamma * (-1)^k
        const double s = (r % 2 == 0 ? -1.0 : 1.0) * gamma;
        for (double& v : f.row(r)) v *= s;
    }
    return Frame(std::move(f));
}

Frame random_sphere_frame(std::size_t n, std::size_t m, std::uint64_t seed) {
    if (n == 0 || m < n) throw ShapeError("random_sphere_frame: need M >= N >= 1");
    numkit::Rng rng(seed);
    for (;;) {
        Matrix f(m, n);
        for (std::size_t k = 0; k < m; ++k) {
            const Vector v = rng.uniform_unit_sphere(n);
            std::copy(v.begin(), v.end(), f.row(k).begin());
        }
        try {
            return Frame(std::move(f));
        } catch (const RankError&) {
            // degenerate draw; take the next one from the same stream
        }
    }
}

Frame identity_frame(std::size_t n) { return Frame(Matrix::identity(n)); }

FrameReport classify(const Frame& frame) {
    const Matrix& f = frame.analysis();
    const std::size_t m = f.rows(), n = f.cols();
    FrameReport r;
    const Vector eig = numkit::symmetric_eigenvalues(numkit::gram(f));
    r.lower_bound = eig.front();
    r.upper_bound = eig.back();
    r.is_tight = r.upper_bound - r.lower_bound < kClassifyTol;

    r.is_unit_norm = true;
    for (std::size_t k = 0; k < m; ++k)
        if (std::abs(numkit::norm(f.row(k)) - 1.0) > kClassifyTol) r.is_unit_norm = false;

    r.is_zero_sum = true;
    for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += f(k, j);
        if (std::abs(s) > kClassifyTol) r.is_zero_sum = false;
    }

    if (r.is_tight && r.is_unit_norm) {
        bool same = true, same_abs = true;
        double first = 0.0;
        bool have = false;
        for (std::size_t k = 0; k < m; ++k) {
            for (std::size_t l = k + 1; l < m; ++l) {
                const double ip = numkit::dot(f.row(k), f.row(l));
                if (!have) {
                    first = ip;
                    have = true;
                    continue;
                }
                if (std::abs(ip - first) > kClassifyTol) same = false;
                if (std::abs(std::abs(ip) - std::abs(first)) > kClassifyTol) same_abs = false;
            }
        }
        r.is_restricted_etf = same;
        r.is_equiangular = same_abs;
        if (same) r.equiangular_constant = first;
    }
    return r;
}

}  // namespace fpq::frames
