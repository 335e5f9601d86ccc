#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>

#include "CLI11.hpp"
#include "fpq/bench/experiments.hpp"
#include "fpq/numkit/errors.hpp"

using namespace fpq;
using namespace fpq::bench;

namespace {

struct Flags {
    std::size_t n = 4;
    std::size_t m = 0;
    std::size_t m_max = 0;
    std::string frame = "mhtf";
    int gamma = -1;
    int variant = 1;
    std::string source = "uniform";
    std::size_t trials = 0;
    std::uint64_t seed = 1;
    std::string strategy = "singleton";
    std::string composition;
    std::string out;
    double step = 0.1;
    bool corrupt_delta = false;
    std::size_t pilot = 100000;
};

void add_common(CLI::App* app, Flags& f) {
    app->add_option("--n", f.n, "signal dimension N")->check(CLI::PositiveNumber);
    app->add_option("--m", f.m, "frame size M");
    app->add_option("--frame", f.frame, "frame kind")->check(CLI::IsMember({"htf", "mhtf", "identity", "sphere"}));
    app->add_option("--gamma", f.gamma, "modulation sign")->check(CLI::IsMember({1, -1}));
    app->add_option("--variant", f.variant, "PSC variant")->check(CLI::IsMember({1, 2}));
    app->add_option("--source", f.source, "source")->check(CLI::IsMember({"uniform", "gaussian", "sphere"}));
    app->add_option("--trials", f.trials, "Monte Carlo trials")->check(CLI::PositiveNumber);
    app->add_option("--seed", f.seed, "random seed");
    app->add_option("--composition", f.composition, "single composition, e.g. 2-3-2");
    app->add_option("--pilot", f.pilot, "pilot samples for canonical codewords")->check(CLI::PositiveNumber);
    app->add_option("--out", f.out, "output file (default stdout)");
}

ExperimentConfig to_config(const Flags& f, std::size_t default_trials) {
    ExperimentConfig c;
    c.n = f.n;
    c.m = f.m ? f.m : f.n + 1;
    c.m_max = f.m_max ? f.m_max : 4096;
    c.frame = parse_frame_kind(f.frame);
    c.gamma = f.gamma;
    c.variant = f.variant == 2 ? psc::Variant::II : psc::Variant::I;
    c.source = psc::parse_source(f.source);
    c.trials = f.trials ? f.trials : default_trials;
    c.seed = f.seed;
    c.strategy = decoders::parse_index_set_kind(f.strategy);
    c.composition = f.composition;
    c.pilot_trials = f.pilot;
    return c;
}

template <class Write>
void emit(const std::string& path, Write&& write) {
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path);
    write(os);
    if (!os) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frame permutation quantization experiments"};
    app.require_subcommand(1);
    Flags f;

    auto* sweep = app.add_subcommand("sweep", "rate-distortion sweep over compositions");
    add_common(sweep, f);
    auto* entropy = app.add_subcommand("entropy", "empirical output entropy per composition");
    add_common(entropy, f);
    auto* psc_rd = app.add_subcommand("psc-rd", "permutation source codes alone (F = I)");
    add_common(psc_rd, f);
    auto* decay = app.add_subcommand("decay", "MSE decay of recursive decoding against M");
    add_common(decay, f);
    decay->add_option("--m-max", f.m_max, "largest M on the grid")->check(CLI::PositiveNumber);
    decay->add_option("--strategy", f.strategy, "index sets")
        ->check(CLI::IsMember({"singleton", "sqrt", "exhaustive", "scalar"}));
    decay->add_option("--step", f.step, "quantizer step for --strategy scalar")->check(CLI::PositiveNumber);
    auto* cells = app.add_subcommand("cells", "interior test of every cell of one composition");
    add_common(cells, f);
    auto* verify = app.add_subcommand("verify", "identity and invariant checks");
    verify->add_option("--seed", f.seed, "random seed");
    verify->add_option("--trials", f.trials, "trials for randomized checks")->check(CLI::PositiveNumber);
    verify->add_flag("--corrupt-delta", f.corrupt_delta, "flip one sign of the difference matrix (negative control)");
    verify->add_option("--out", f.out, "output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*sweep) {
            const auto r = sweep_rate_distortion(to_config(f, 100000));
            std::size_t skipped = 0;
            for (const auto& x : r) skipped += x.skipped;
            if (skipped) std::fprintf(stderr, "skipped %zu degenerate or stalled decodes\n", skipped);
            // records come in (consistent, canonical) pairs per composition
            for (std::size_t i = 0; i + 1 < r.size(); i += 2) {
                const double slack = 3.0 * std::hypot(r[i].mse_stderr, r[i + 1].mse_stderr);
                if (r[i].mse > r[i + 1].mse + slack)
                    std::fprintf(stderr, "flag: %s mse above canonical by more than 3 s.e. at %s\n", r[i].decoder.c_str(),
                                 r[i].composition.c_str());
            }
            emit(f.out, [&](std::ostream& os) { write_sweep_csv(os, r); });
        } else if (*entropy) {
            const auto r = variable_rate_experiment(to_config(f, 100000));
            emit(f.out, [&](std::ostream& os) { write_sweep_csv(os, r); });
        } else if (*psc_rd) {
            Flags g = f;
            g.frame = "identity";
            g.m = f.n;
            const auto r = psc_rate_distortion(to_config(g, 100000));
            emit(f.out, [&](std::ostream& os) { write_sweep_csv(os, r); });
        } else if (*decay) {
            Flags g = f;
            if (f.strategy == "scalar") g.strategy = "singleton";
            ExperimentConfig c = to_config(g, 1000);
            if (!f.m_max) c.m_max = f.strategy == "exhaustive" ? 512 : 4096;
            const auto r = f.strategy == "scalar" ? sq_decay_experiment(c, f.step) : mse_decay_experiment(c);
            std::fprintf(stderr, "log-log slope over the top decade: %.4f\n", fit_loglog_slope(r));
            emit(f.out, [&](std::ostream& os) { write_decay_csv(os, r); });
        } else if (*cells) {
            const ExperimentConfig c = to_config(f, 1);
            validate(c);
            const psc::Composition m =
                c.composition.empty() ? psc::Composition(std::vector<std::size_t>(c.m, 1)) : psc::Composition::parse(c.composition);
            const auto r = cell_census(make_frame(c.frame, c.n, c.m, c.gamma, c.seed), m, c.variant);
            emit(f.out, [&](std::ostream& os) { write_cells_csv(os, r); });
        } else if (*verify) {
            VerifyOptions o;
            o.seed = f.seed;
            o.corrupt_delta = f.corrupt_delta;
            if (f.trials) o.trials = f.trials;
            const auto r = verify_suite(o);
            emit(f.out, [&](std::ostream& os) { write_verify_csv(os, r); });
            for (const auto& c : r)
                if (!c.pass) return 1;
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
