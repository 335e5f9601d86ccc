#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fpq/frames.hpp"
#include "fpq/quant.hpp"

namespace fpq::decoders {

using frames::Frame;
using numkit::Matrix;
using numkit::Vector;
using quant::Composition;
using quant::FpqCode;
using quant::Variant;

struct DecodeResult {
    Vector estimate;
    // Consistency margin recomputed at the estimate: min(B x_hat) for FPQ
    // decoders, smallest interval slack Delta/2 - |<x_hat, phi_k> - y_k| for
    // scalar-quantized expansions. Negative means inconsistent.
    double margin = 0.0;
    // Optimal slack delta* for the LP/QP decoders.
    double slack = 0.0;
    bool degenerate = false;
    int solver_iterations = 0;
    std::size_t projections = 0;
};

/// Uniformly scalar-quantized frame expansion: y_hat_k = Delta * round(y_k / Delta).
struct QuantizedExpansion {
    Matrix analysis;
    double step = 1.0;
    Vector coefficients;
};

QuantizedExpansion quantize(const Matrix& analysis, double step, std::span<const double> x);

/// Slack Delta/2 - |<x, phi_k> - y_hat_k|, minimized over k.
double interval_margin(const QuantizedExpansion& q, std::span<const double> x);

/// Maximum-slack consistent estimate by linear programming.
DecodeResult lp_decode_sq(const QuantizedExpansion& q);

/// Sequential projection onto each coefficient's slab, starting from 0.
/// `checkpoints` (ascending counts of coefficients used) collect the running
/// estimate after that many coefficients.
DecodeResult recursive_decode_sq(const QuantizedExpansion& q, const std::vector<std::size_t>& checkpoints = {},
                                 std::vector<Vector>* snapshots = nullptr);

/// Maximum-slack consistent estimate inside [-1/2, 1/2]^N.
DecodeResult lp_decode_uniform(const Frame& f, const Composition& m, const FpqCode& code);

/// E||x|| for x ~ N(0, I_N): sqrt(2) Gamma((N+1)/2) / Gamma(N/2), evaluated by
/// a product recurrence in N.
double mean_gaussian_norm(std::size_t n);
/// log B(a, b) through lgamma.
double log_beta(double a, double b);

/// Angular estimate from the QP min 1/2|x|^2 - delta s.t. B x >= delta 1,
/// rescaled to length mean_gaussian_norm(N). An empty-interior cell gives a
/// zero angular solution and is flagged degenerate.
DecodeResult qp_decode_gaussian(const Frame& f, const Composition& m, const FpqCode& code);

enum class IndexSetKind { Singleton, Sqrt, Exhaustive };

IndexSetKind parse_index_set_kind(const std::string& name);
std::string to_string(IndexSetKind k);

/// Sign data nu_{k,j} = sign(<x, phi_k - phi_j>) in {-1, 0, +1}.
class PairwiseSigns {
public:
    /// From an all-ones composition code: earlier sorted position means larger.
    static PairwiseSigns from_code(const FpqCode& code);
    /// From the frame coefficients themselves; exact ties give 0.
    static PairwiseSigns from_coefficients(Vector y);

    int operator()(std::size_t k, std::size_t j) const;
    std::size_t size() const noexcept { return size_; }

private:
    std::vector<std::size_t> position_;
    Vector y_;
    std::size_t size_ = 0;
};

struct RecursiveOptions {
    IndexSetKind kind = IndexSetKind::Singleton;
    std::uint64_t seed = 1;
    // Replaces the random unit start when set.
    std::optional<Vector> start;
    // Record ||x - x_hat|| before the first and after every projection.
    std::optional<Vector> truth;
    // Numbers of frame vectors k (1-based) after which to store the
    // normalized estimate.
    std::vector<std::size_t> checkpoints;
};

struct RecursiveResult {
    DecodeResult result;
    std::vector<double> raw_errors;
    std::vector<Vector> snapshots;                // normalized estimates at checkpoints
    std::vector<std::size_t> snapshot_projections; // projection-step count at each checkpoint
};

/// Recursive local-consistency decoding for Variant I with m = (1, ..., 1).
/// Index sets: singleton {k-1}, a uniformly random subset of {1..k-1} of size
/// floor(sqrt(k)), or all of {1..k-1}; each set is visited in random order.
RecursiveResult recursive_decode_fpq(const Matrix& vectors, const PairwiseSigns& nu, const RecursiveOptions& opt);

}  // namespace fpq::decoders
