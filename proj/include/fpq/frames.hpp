#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>

#include "fpq/numkit/matrix.hpp"

namespace fpq::frames {

using numkit::Matrix;
using numkit::Vector;

/// Analysis operator F (M x N, rows are the frame vectors) together with its
/// pseudo-inverse. Construction rejects M < N and rank-deficient F.
class Frame {
public:
    explicit Frame(Matrix analysis);

    const Matrix& analysis() const noexcept { return f_; }
    const Matrix& pseudo_inverse() const noexcept { return pinv_; }
    std::size_t size() const noexcept { return f_.rows(); }       // M
    std::size_t dimension() const noexcept { return f_.cols(); }  // N
    double redundancy() const noexcept { return double(size()) / double(dimension()); }
    Vector vector(std::size_t k) const { return f_.row_vector(k); }

    /// y = F x
    Vector expand(std::span<const double> x) const;

private:
    Matrix f_;
    Matrix pinv_;
};

struct FrameReport {
    double lower_bound = 0.0;  // A, smallest eigenvalue of F^T F
    double upper_bound = 0.0;  // B, largest
    bool is_tight = false;
    bool is_unit_norm = false;
    bool is_zero_sum = false;
    bool is_restricted_etf = false;  // tight, unit norm, one signed off-diagonal value
    bool is_equiangular = false;     // tight, unit norm, one |off-diagonal| value
    std::optional<double> equiangular_constant;  // signed value when restricted
};

inline constexpr double kStructureTol = 1e-10;
inline constexpr double kClassifyTol = 1e-9;

/// Real harmonic tight frame of M vectors in R^N.
Frame real_htf(std::size_t n, std::size_t m);

/// Modulated HTF: row k (1-based) of real_htf scaled by gamma * (-1)^k.
Frame modulated_htf(std::size_t n, std::size_t m, int gamma = -1);

/// M i.i.d. rows uniform on the unit sphere of R^N.
Frame random_sphere_frame(std::size_t n, std::size_t m, std::uint64_t seed);

Frame identity_frame(std::size_t n);

FrameReport classify(const Frame& f);

/// Plain text: "M N" then M lines of N numbers printed with 17 digits.
void write_frame(std::ostream& os, const Frame& f);
Frame read_frame(std::istream& is);

}  // namespace fpq::frames
