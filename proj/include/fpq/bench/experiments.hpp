#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fpq/decoders.hpp"
#include "fpq/numkit/rng.hpp"

namespace fpq::bench {

using numkit::Matrix;
using numkit::Vector;
using psc::Composition;
using psc::Source;
using psc::Variant;

enum class FrameKind { Htf, Mhtf, Identity, Sphere };

FrameKind parse_frame_kind(const std::string& name);
std::string to_string(FrameKind k);

struct ExperimentConfig {
    std::size_t n = 4;
    std::size_t m = 5;
    std::size_t m_max = 4096;
    FrameKind frame = FrameKind::Mhtf;
    int gamma = -1;
    Variant variant = Variant::I;
    Source source = Source::UniformBox;
    std::size_t trials = 100000;
    std::uint64_t seed = 1;
    decoders::IndexSetKind strategy = decoders::IndexSetKind::Singleton;
    // Restrict sweeps to one composition ("2-3-2"); empty means all.
    std::string composition;
    // Samples for the Monte Carlo order statistics behind the canonical codeword.
    std::size_t pilot_trials = 100000;
};

void validate(const ExperimentConfig& cfg);

frames::Frame make_frame(FrameKind kind, std::size_t n, std::size_t m, int gamma, std::uint64_t seed);

/// Trials are split into fixed chunks with RNG stream (seed, chunk); the
/// chunk layout does not depend on the worker count.
inline constexpr std::size_t kChunkTrials = 1024;

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;
    std::size_t count = 0;

    void add(double v) {
        sum += v;
        sum_sq += v * v;
        ++count;
    }
    void merge(const Moments& o) {
        sum += o.sum;
        sum_sq += o.sum_sq;
        count += o.count;
    }
    double mean() const { return count ? sum / double(count) : 0.0; }
    double std_error() const;
};

struct SweepRecord {
    std::string frame;
    std::size_t n = 0;
    std::size_t m = 0;
    Variant variant = Variant::I;
    std::string composition;
    double rate_fixed = 0.0;
    double rate_entropy = 0.0;
    double mse = 0.0;
    double mse_stderr = 0.0;
    std::size_t trials = 0;
    std::string decoder;
    // Not written to CSV.
    std::size_t skipped = 0;
};

/// Every composition of M (or cfg.composition): encode cfg.trials draws and
/// decode with the consistent decoder (LP for the box source, QP for the
/// Gaussian and sphere sources) and with canonical reconstruction.
std::vector<SweepRecord> sweep_rate_distortion(const ExperimentConfig& cfg);

/// Empirical output entropy per composition; canonical-decode MSE alongside.
std::vector<SweepRecord> variable_rate_experiment(const ExperimentConfig& cfg);

/// Permutation source codes alone (F = I_N), optimal initial codewords.
std::vector<SweepRecord> psc_rate_distortion(const ExperimentConfig& cfg);

struct DecayRecord {
    std::size_t n = 0;
    std::size_t m = 0;
    std::string strategy;
    double projections = 0.0;  // mean projection steps up to M
    double mse = 0.0;
    double mse_stderr = 0.0;
    std::size_t trials = 0;
};

/// Half-octave grid round(2^(j/2)) in [lo, hi], with hi appended.
std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi);

/// Recursive FPQ decoding (m = (1, ..., 1), Variant I) of unit-sphere
/// sources with i.i.d. random unit frame vectors, drawn fresh per trial.
/// MSE of the normalized estimate at each grid point up to cfg.m_max.
std::vector<DecayRecord> mse_decay_experiment(const ExperimentConfig& cfg);

/// Recursive decoding of scalar-quantized expansions with step `step`, same
/// sources and frames as mse_decay_experiment.
std::vector<DecayRecord> sq_decay_experiment(const ExperimentConfig& cfg, double step);

/// Least-squares slope of log(mse) against log(M) over M >= M_max / 10.
double fit_loglog_slope(const std::vector<DecayRecord>& records);

struct CellRecord {
    std::string composition;
    std::size_t index = 0;
    std::vector<std::size_t> order;
    std::vector<int> signs;
    double interior_margin = 0.0;
    bool empty = false;
};

/// Every code of (m, variant) with its LP interior margin.
std::vector<CellRecord> cell_census(const frames::Frame& f, const Composition& m, Variant v);

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double threshold = 0.0;
};

struct VerifyOptions {
    std::uint64_t seed = 1;
    // Flip one sign of the difference matrix used by the duality check.
    bool corrupt_delta = false;
    // Trials for the randomized checks.
    std::size_t trials = 2000;
};

std::vector<CheckResult> verify_suite(const VerifyOptions& opt);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);
void write_decay_csv(std::ostream& os, const std::vector<DecayRecord>& records);
void write_cells_csv(std::ostream& os, const std::vector<CellRecord>& records);
void write_verify_csv(std::ostream& os, const std::vector<CheckResult>& records);
/// "%.17g"
std::string format_double(double v);

}  // namespace fpq::bench
