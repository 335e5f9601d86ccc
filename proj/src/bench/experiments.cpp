#include <algorithm>
#include <cmath>
#include <map>

#include "fpq/bench/experiments.hpp"
#include "fpq/bench/parallel.hpp"
#include "fpq/numkit/errors.hpp"

namespace fpq::bench {

FrameKind parse_frame_kind(const std::string& name) {
    if (name == "htf") return FrameKind::Htf;
    if (name == "mhtf") return FrameKind::Mhtf;
    if (name == "identity") return FrameKind::Identity;
    if (name == "sphere") return FrameKind::Sphere;
    throw ContractError("unknown frame kind: " + name);
}

std::string to_string(FrameKind k) {
    switch (k) {
        case FrameKind::Htf: return "htf";
        case FrameKind::Mhtf: return "mhtf";
        case FrameKind::Identity: return "identity";
        case FrameKind::Sphere: return "sphere";
    }
    return "?";
}

void validate(const ExperimentConfig& cfg) {
    if (cfg.n == 0) throw ContractError("N must be positive");
    if (cfg.trials == 0) throw ContractError("trials must be at least 1");
    if (cfg.m < cfg.n) throw ContractError("M must be at least N");
    if (cfg.gamma != 1 && cfg.gamma != -1) throw ContractError("gamma must be +1 or -1");
    if (!cfg.composition.empty() && Composition::parse(cfg.composition).total() != cfg.m)
        throw ContractError("composition parts must sum to M");
}

frames::Frame make_frame(FrameKind kind, std::size_t n, std::size_t m, int gamma, std::uint64_t seed) {
    switch (kind) {
        case FrameKind::Htf: return frames::real_htf(n, m);
        case FrameKind::Mhtf: return frames::modulated_htf(n, m, gamma);
        case FrameKind::Identity:
            if (m != n) throw ContractError("identity frame needs M = N");
            return frames::identity_frame(n);
        case FrameKind::Sphere: return frames::random_sphere_frame(n, m, seed);
    }
    throw ContractError("unknown frame kind");
}

double Moments::std_error() const {
    if (count < 2) return 0.0;
    const double c = double(count);
    const double var = std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
    return std::sqrt(var / c);
}

namespace {

constexpr std::uint64_t kPilotSalt = 0x9e3779b97f4a7c15ULL;

struct ChunkStats {
    Moments primary;
    Moments canonical;
    std::size_t skipped = 0;
    std::map<std::string, std::size_t> counts;
};

std::string code_key(const psc::PermutationCode& c) {
    std::string key;
    for (std::size_t i : c.order) key += static_cast<char>(i);
    key += '|';
    for (std::size_t i = 0; i < c.coded_signs; ++i) key += c.signs[i] > 0 ? '+' : '-';
    return key;
}

double squared_error(const Vector& x, const Vector& xh) {
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - xh[i]) * (x[i] - xh[i]);
    return d / double(x.size());
}

double entropy_bits(const std::map<std::string, std::size_t>& counts, std::size_t total) {
    double h = 0.0;
    for (const auto& [key, c] : counts) {
        const double p = double(c) / double(total);
        h -= p * std::log2(p);
    }
    return h;
}

std::vector<Composition> compositions_of(const ExperimentConfig& cfg) {
    if (!cfg.composition.empty()) return {Composition::parse(cfg.composition)};
    if (cfg.m > 12) throw ContractError("exhaustive composition sweeps are limited to M <= 12");
    return Composition::all(cfg.m);
}

// Canonical codeword from Monte Carlo order statistics of the (magnitudes
// of the) frame coefficients. Variant II reconstructs the uncoded last
// block as zero, matching the rate accounting.
psc::InitialCodeword canonical_codeword(const Composition& m, const Vector& means, Variant v) {
    psc::InitialCodeword mu = psc::optimal_initial_codeword(m, means, v);
    if (v == Variant::II) {
        Vector vals = mu.values();
        vals.back() = 0.0;
        mu = psc::InitialCodeword(vals, v);
    }
    return mu;
}

enum class Decode { None, Consistent };

std::vector<SweepRecord> run_sweep(const ExperimentConfig& cfg, Decode mode) {
    validate(cfg);
    const frames::Frame f = make_frame(cfg.frame, cfg.n, cfg.m, cfg.gamma, cfg.seed);
    const std::vector<Composition> comps = compositions_of(cfg);
    const bool magnitude = cfg.variant == Variant::II;
    const psc::OrderStatistics stats = psc::sampled_order_statistics(
        [&](numkit::Rng& r) { return f.expand(psc::draw(cfg.source, r, cfg.n)); }, magnitude, cfg.pilot_trials,
        cfg.seed ^ kPilotSalt);

    const std::size_t chunks = (cfg.trials + kChunkTrials - 1) / kChunkTrials;
    std::vector<psc::InitialCodeword> mus;
    for (const auto& m : comps) mus.push_back(canonical_codeword(m, stats.means, cfg.variant));

    const auto results = parallel_map<ChunkStats>(comps.size() * chunks, [&](std::size_t job) {
        const std::size_t ci = job / chunks, chunk = job % chunks;
        const Composition& m = comps[ci];
        numkit::Rng rng(cfg.seed, (m.id() << 24) | chunk);
        const std::size_t begin = chunk * kChunkTrials, end = std::min(cfg.trials, begin + kChunkTrials);
        ChunkStats s;
        for (std::size_t t = begin; t < end; ++t) {
            const Vector x = psc::draw(cfg.source, rng, cfg.n);
            const quant::FpqCode code = quant::fpq_encode(f, m, x, cfg.variant);
            ++s.counts[code_key(code)];
            s.canonical.add(squared_error(x, quant::canonical_decode(f, m, mus[ci], code)));
            if (mode == Decode::None) continue;
            try {
                decoders::DecodeResult r = cfg.source == Source::UniformBox ? decoders::lp_decode_uniform(f, m, code)
                                                                             : decoders::qp_decode_gaussian(f, m, code);
                if (r.degenerate) {
                    ++s.skipped;
                    continue;
                }
                if (cfg.source == Source::UnitSphere) {
                    const double len = numkit::norm(r.estimate);
                    if (len > 0.0)
                        for (double& c : r.estimate) c /= len;
                }
                s.primary.add(squared_error(x, r.estimate));
            } catch (const SolverStall&) {
                ++s.skipped;
            }
        }
        return s;
    });

    std::vector<SweepRecord> out;
    const std::string decoder = cfg.source == Source::UniformBox ? "lp-uniform" : "qp-gaussian";
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
        ChunkStats total;
        for (std::size_t c = 0; c < chunks; ++c) {
            const ChunkStats& s = results[ci * chunks + c];
            total.primary.merge(s.primary);
            total.canonical.merge(s.canonical);
            total.skipped += s.skipped;
            for (const auto& [k, v] : s.counts) total.counts[k] += v;
        }
        SweepRecord base;
        base.frame = to_string(cfg.frame);
        base.n = cfg.n;
        base.m = cfg.m;
        base.variant = cfg.variant;
        base.composition = comps[ci].to_string();
        base.rate_fixed = quant::fpq_rate(comps[ci], cfg.variant, cfg.n);
        base.rate_entropy = entropy_bits(total.counts, cfg.trials) / double(cfg.n);
        if (mode == Decode::Consistent) {
            SweepRecord r = base;
            r.mse = total.primary.mean();
            r.mse_stderr = total.primary.std_error();
            r.trials = total.primary.count;
            r.decoder = decoder;
            r.skipped = total.skipped;
            out.push_back(r);
        }
        SweepRecord r = base;
        r.mse = total.canonical.mean();
        r.mse_stderr = total.canonical.std_error();
        r.trials = total.canonical.count;
        r.decoder = "canonical";
        out.push_back(r);
    }
    return out;
}

}  // namespace

std::vector<SweepRecord> sweep_rate_distortion(const ExperimentConfig& cfg) { return run_sweep(cfg, Decode::Consistent); }

std::vector<SweepRecord> variable_rate_experiment(const ExperimentConfig& cfg) { return run_sweep(cfg, Decode::None); }

std::vector<SweepRecord> psc_rate_distortion(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.m = cfg.n;
    c.frame = FrameKind::Identity;
    return run_sweep(c, Decode::None);
}

std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi) {
    if (lo == 0 || hi < lo) throw ContractError("log_grid: need 1 <= lo <= hi");
    std::vector<std::size_t> g;
    for (int j = 0;; ++j) {
        const auto v = static_cast<std::size_t>(std::llround(std::pow(2.0, 0.5 * j)));
        if (v > hi) break;
        if (v >= lo && (g.empty() || g.back() != v)) g.push_back(v);
    }
    if (g.empty() || g.back() != hi) g.push_back(hi);
    return g;
}

namespace {

struct TrialCurve {
    std::vector<double> errors;
    std::vector<double> projections;
};

Matrix random_unit_rows(numkit::Rng& rng, std::size_t m, std::size_t n) {
    Matrix a(m, n);
    for (std::size_t k = 0; k < m; ++k) {
        const Vector v = rng.uniform_unit_sphere(n);
        std::copy(v.begin(), v.end(), a.row(k).begin());
    }
    return a;
}

std::vector<DecayRecord> collect(const ExperimentConfig& cfg, const std::vector<std::size_t>& grid,
                                 const std::vector<TrialCurve>& curves, const std::string& strategy) {
    std::vector<DecayRecord> out;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        Moments err;
        double proj = 0.0;
        for (const auto& c : curves) {
            err.add(c.errors[g]);
            proj += c.projections[g];
        }
        out.push_back({cfg.n, grid[g], strategy, proj / double(curves.size()), err.mean(), err.std_error(),
                       curves.size()});
    }
    return out;
}

}  // namespace

std::vector<DecayRecord> mse_decay_experiment(const ExperimentConfig& cfg) {
    if (cfg.n == 0 || cfg.trials == 0) throw ContractError("decay: N and trials must be positive");
    const std::vector<std::size_t> grid = log_grid(std::min(cfg.m_max, std::max<std::size_t>(cfg.n, 2)), cfg.m_max);
    const auto curves = parallel_map<TrialCurve>(cfg.trials, [&](std::size_t t) {
        numkit::Rng rng(cfg.seed, t);
        const Vector x = rng.uniform_unit_sphere(cfg.n);
        const Matrix phi = random_unit_rows(rng, cfg.m_max, cfg.n);
        decoders::RecursiveOptions opt;
        opt.kind = cfg.strategy;
        opt.seed = rng.engine()();
        opt.checkpoints = grid;
        const auto r = decoders::recursive_decode_fpq(phi, decoders::PairwiseSigns::from_coefficients(phi * x), opt);
        TrialCurve c;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            c.errors.push_back(squared_error(x, r.snapshots[g]));
            c.projections.push_back(double(r.snapshot_projections[g]));
        }
        return c;
    });
    return collect(cfg, grid, curves, decoders::to_string(cfg.strategy));
}

std::vector<DecayRecord> sq_decay_experiment(const ExperimentConfig& cfg, double step) {
    if (cfg.n == 0 || cfg.trials == 0) throw ContractError("decay: N and trials must be positive");
    const std::vector<std::size_t> grid = log_grid(std::min(cfg.m_max, std::max<std::size_t>(cfg.n, 2)), cfg.m_max);
    const auto curves = parallel_map<TrialCurve>(cfg.trials, [&](std::size_t t) {
        numkit::Rng rng(cfg.seed, t);
        const Vector x = rng.uniform_unit_sphere(cfg.n);
        const Matrix phi = random_unit_rows(rng, cfg.m_max, cfg.n);
        std::vector<Vector> snaps;
        const decoders::DecodeResult r =
            decoders::recursive_decode_sq(decoders::quantize(phi, step, x), grid, &snaps);
        (void)r;
        TrialCurve c;
        for (std::size_t g = 0; g < grid.size(); ++g) {
            c.errors.push_back(squared_error(x, snaps[g]));
            c.projections.push_back(double(grid[g]));
        }
        return c;
    });
    return collect(cfg, grid, curves, "sq-recursive");
}

double fit_loglog_slope(const std::vector<DecayRecord>& records) {
    if (records.empty()) throw ContractError("fit_loglog_slope: no records");
    std::size_t top = 0;
    for (const auto& r : records) top = std::max(top, r.m);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t k = 0;
    for (const auto& r : records) {
        if (10 * r.m < top || !(r.mse > 0.0)) continue;
        const double lx = std::log(double(r.m)), ly = std::log(r.mse);
        sx += lx, sy += ly, sxx += lx * lx, sxy += lx * ly;
        ++k;
    }
    if (k < 2) throw ContractError("fit_loglog_slope: fewer than two points in the top decade");
    const double kk = double(k);
    return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

std::vector<CellRecord> cell_census(const frames::Frame& f, const Composition& m, Variant v) {
    if (m.total() != f.size()) throw ShapeError("cell_census: composition total differs from M");
    const auto codes = quant::all_codes(m, v);
    return parallel_map<CellRecord>(codes.size(), [&](std::size_t i) {
        CellRecord r;
        r.composition = m.to_string();
        r.index = i;
        r.order = codes[i].order;
        r.signs = codes[i].signs;
        r.interior_margin = quant::cell_interior_margin(quant::cell_system(f, m, codes[i]), f.dimension());
        r.empty = !(r.interior_margin > 1e-9);
        return r;
    });
}

}  // namespace fpq::bench
