#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "fpq/frames.hpp"
#include "fpq/psc.hpp"

namespace fpq::quant {

using frames::Frame;
using numkit::Matrix;
using numkit::Vector;
using psc::Composition;
using psc::InitialCodeword;
using psc::Variant;

/// FPQ output: P as an index map plus the diagonal of V. Shares the PSC
/// representation so that F = I reduces to plain permutation coding.
using FpqCode = psc::PermutationCode;

inline constexpr double kConsistencyTol = 1e-9;

/// Delta(m): L(m) x M, one +1 and one -1 per row, blocks i = 1..K-1 stacked,
/// within block i the column of the -1 runs over I_{i+1}.
Matrix difference_matrix(const Composition& m);

/// Delta(m) stacked over the selector of the I_{K-1} coordinates.
/// Throws ContractError for K = 1.
Matrix extended_difference_matrix(const Composition& m);

/// L(m) = sum m_i m_{i+1}
std::size_t difference_rows(const Composition& m);

FpqCode fpq_encode_v1(const Frame& f, const Composition& m, std::span<const double> x);
/// Signs of the last m_K sorted coefficients are never coded (V entries +1).
FpqCode fpq_encode_v2(const Frame& f, const Composition& m, std::span<const double> x);
FpqCode fpq_encode(const Frame& f, const Composition& m, std::span<const double> x, Variant v);

/// x_hat = F^+ P^{-1} V^{-1} mu_expanded.
Vector canonical_decode(const Frame& f, const Composition& m, const InitialCodeword& mu, const FpqCode& code);

/// Rows of P F (Variant I) or V P F (Variant II).
Matrix permuted_analysis(const Frame& f, const FpqCode& code);

/// Cone {x : B x >= 0}.
struct ConsistencySystem {
    Matrix b;

    /// min(B x); +infinity when B has no rows.
    double check(std::span<const double> x) const;
    bool consistent(std::span<const double> x, double tol = kConsistencyTol) const { return check(x) >= -tol; }
};

/// The constraint matrix exactly as the defining inequalities state it:
/// Delta(m) P F (Variant I) or [Delta(m); 0 I 0] V P F (Variant II, K >= 2;
/// K = 1 gives no rows).
ConsistencySystem consistency_system(const Frame& f, const Composition& m, const FpqCode& code);

/// Complete description of the encoding cell. Identical to
/// consistency_system for Variant I. For Variant II it adds the rows
/// z_k + z_l >= 0 (k in I_{K-1}, l in I_K) so that the uncoded last block is
/// bounded in magnitude by the block above it; without them the cone is
/// strictly larger than the cell.
ConsistencySystem cell_system(const Frame& f, const Composition& m, const FpqCode& code);

/// Per-component rate: log2(M!/prod m_i!)/N, plus (M - m_K)/N for Variant II.
double fpq_rate(const Composition& m, Variant v, std::size_t n);

/// Largest delta with B x >= delta 1, |x_i| <= 1, delta <= 1.
double cell_interior_margin(const ConsistencySystem& s, std::size_t n);
bool cell_has_interior(const Frame& f, const Composition& m, const FpqCode& code);

/// Every canonical code for (m, variant), in rank order.
std::vector<FpqCode> all_codes(const Composition& m, Variant v);

struct ReconstructionWitness {
    Composition m{std::vector<std::size_t>{1}};
    Vector mu;
    Vector x;
    double margin = 0.0;
};

struct LinearReconstructionReport {
    // Form check on A = F R.
    bool form_holds = false;
    double scale_a = 0.0;         // the a in a I + J (or a I)
    double form_residual = 0.0;   // max deviation from the fitted form
    // Randomized probe over (m, mu, x).
    std::size_t trials = 0;
    std::size_t violations = 0;   // trials with min(B x_hat) < -tolerance
    double worst_margin = std::numeric_limits<double>::infinity();
    std::optional<ReconstructionWitness> worst;
    double consistency_rate() const { return trials == 0 ? 1.0 : 1.0 - double(violations) / double(trials); }
};

/// Tests whether A = F R has the form a I + J (J column-constant, a >= 0)
/// for Variant I, or a I with M = N for Variant II, then probes consistency
/// of x_hat = R P^{-1} V^{-1} mu over random compositions, initial codewords
/// and Gaussian sources.
LinearReconstructionReport check_linear_reconstruction_theorem(const Frame& f, const Matrix& r, Variant v,
                                                               std::size_t trials, std::uint64_t seed,
                                                               double tolerance = kConsistencyTol);

/// Fixed-rate FPQ bitstream: variant, M, composition id, then the code rank
/// in ceil(log2 L) bits, most significant first.
struct Packed {
    std::vector<std::uint8_t> bytes;
    std::size_t payload_bits = 0;
};

std::size_t fpq_payload_bits(const Composition& m, Variant v);
Packed pack(const FpqCode& code, const Composition& m);

struct Unpacked {
    Composition m;
    FpqCode code;
};
Unpacked unpack(const std::vector<std::uint8_t>& bytes);

}  // namespace fpq::quant
