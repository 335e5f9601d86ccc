#include <algorithm>
#include <cmath>
#include <limits>

#include "fpq/bench/experiments.hpp"
#include "fpq/numkit/linalg.hpp"

namespace fpq::bench {

namespace {

double inner_row(const Matrix& f, std::size_t k, std::size_t l) { return numkit::dot(f.row(k), f.row(l)); }

CheckResult at_most(std::string name, double measured, double threshold) {
    return {std::move(name), measured <= threshold, measured, threshold};
}

CheckResult at_least(std::string name, double measured, double threshold) {
    return {std::move(name), measured >= threshold, measured, threshold};
}

}  // namespace

std::vector<CheckResult> verify_suite(const VerifyOptions& opt) {
    std::vector<CheckResult> out;
    numkit::Rng rng(opt.seed, 0);

    {
        double inner_dev = 0.0, zero_sum = 0.0, dual = 0.0;
        for (std::size_t n = 2; n <= 10; ++n) {
            const std::size_t m = n + 1;
            const Matrix h = frames::real_htf(n, m).analysis();
            for (std::size_t k = 0; k < m; ++k)
                for (std::size_t l = k + 1; l < m; ++l) {
                    const double sign = (k + l + 1) % 2 == 0 ? 1.0 : -1.0;
                    inner_dev = std::max(inner_dev, std::abs(double(n) * inner_row(h, k, l) - sign));
                }
            const frames::Frame mod = frames::modulated_htf(n, m);
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < m; ++k) s += mod.analysis()(k, j);
                zero_sum = std::max(zero_sum, std::abs(s));
            }
            Matrix target = Matrix::identity(m);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t j = 0; j < m; ++j) target(i, j) -= 1.0 / double(m);
            dual = std::max(dual, numkit::max_abs_diff(mod.analysis() * mod.pseudo_inverse(), target));
        }
        out.push_back(at_most("htf-inner-products", inner_dev, 1e-10));
        out.push_back(at_most("mhtf-zero-sum", zero_sum, 1e-10));
        out.push_back(at_most("mhtf-projection", dual, 1e-10));
    }

    {
        // Sorted coefficients satisfy every differencing row.
        const frames::Frame f = frames::modulated_htf(3, 6);
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < opt.trials; ++t) {
            const Composition m = Composition::from_id(6, rng.below(32));
            if (m.blocks() < 2) continue;
            const Vector x = rng.standard_gaussian(3);
            const quant::FpqCode code = quant::fpq_encode_v1(f, m, x);
            Matrix d = quant::difference_matrix(m);
            if (opt.corrupt_delta)
                for (std::size_t j = 0; j < d.cols(); ++j)
                    if (d(0, j) < 0.0) {
                        d(0, j) = 1.0;
                        break;
                    }
            const Vector dz = d * (quant::permuted_analysis(f, code) * x);
            worst = std::min(worst, *std::min_element(dz.begin(), dz.end()));
        }
        out.push_back(at_least("difference-rows-nonnegative", worst, 0.0));
    }

    {
        const frames::Frame f = frames::modulated_htf(4, 5);
        const auto rep = quant::check_linear_reconstruction_theorem(f, f.pseudo_inverse(), Variant::I, opt.trials,
                                                                   opt.seed + 1);
        out.push_back({"canonical-consistency-m5", rep.form_holds && rep.violations == 0, rep.worst_margin, -1e-9});
    }
    {
        const frames::Frame f = frames::modulated_htf(4, 6);
        const auto rep = quant::check_linear_reconstruction_theorem(f, f.pseudo_inverse(), Variant::I,
                                                                   5 * opt.trials, opt.seed + 2);
        // passes when a violation is found
        out.push_back({"canonical-violation-found-m6", rep.violations > 0 && rep.worst_margin < -1e-6,
                       rep.worst_margin, -1e-6});
    }
    {
        Matrix a(4, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            const Vector r = rng.standard_gaussian(4);
            std::copy(r.begin(), r.end(), a.row(i).begin());
        }
        const auto rep = quant::check_linear_reconstruction_theorem(frames::Frame(a), 2.0 * numkit::inverse(a),
                                                                   Variant::II, opt.trials, opt.seed + 3);
        out.push_back({"variant2-basis-consistency", rep.form_holds && rep.violations == 0, rep.worst_margin, -1e-9});
    }
    {
        const auto cells = cell_census(frames::modulated_htf(2, 4), Composition({2, 2}), Variant::I);
        const double empty = double(std::count_if(cells.begin(), cells.end(), [](const CellRecord& c) { return c.empty; }));
        out.push_back({"empty-cells-n2-m4", empty == 2.0, empty, 2.0});
    }

    {
        std::size_t bad3 = 0, bad4 = 0, total = 0;
        double length = 0.0;
        const frames::Frame f = frames::modulated_htf(4, 5);
        for (std::size_t t = 0; t < std::max<std::size_t>(opt.trials / 10, 20); ++t) {
            const Composition m = Composition::from_id(5, rng.below(16));
            const Variant v = t % 2 == 0 ? Variant::I : Variant::II;
            const Vector xb = rng.uniform_box(4);
            const quant::FpqCode cb = quant::fpq_encode(f, m, xb, v);
            const auto r3 = decoders::lp_decode_uniform(f, m, cb);
            if (r3.degenerate || quant::fpq_encode(f, m, r3.estimate, v) != cb) ++bad3;
            const Vector xg = rng.standard_gaussian(4);
            const quant::FpqCode cg = quant::fpq_encode(f, m, xg, v);
            if (quant::cell_system(f, m, cg).b.rows() > 0) {
                const auto r4 = decoders::qp_decode_gaussian(f, m, cg);
                if (r4.degenerate || quant::fpq_encode(f, m, r4.estimate, v) != cg) ++bad4;
                length = std::max(length, std::abs(numkit::norm(r4.estimate) - decoders::mean_gaussian_norm(4)));
            }
            ++total;
        }
        out.push_back(at_most("lp-decoder-reencodes", double(bad3), 0.0));
        out.push_back(at_most("qp-decoder-reencodes", double(bad4), 0.0));
        out.push_back(at_most("qp-decoder-length", length, 1e-9));
    }

    {
        double worst_rise = 0.0;
        for (const auto kind : {decoders::IndexSetKind::Singleton, decoders::IndexSetKind::Sqrt,
                                decoders::IndexSetKind::Exhaustive})
            for (int t = 0; t < 5; ++t) {
                const Vector x = rng.uniform_unit_sphere(8);
                Matrix phi(200, 8);
                for (std::size_t k = 0; k < 200; ++k) {
                    const Vector v = rng.uniform_unit_sphere(8);
                    std::copy(v.begin(), v.end(), phi.row(k).begin());
                }
                decoders::RecursiveOptions ro;
                ro.kind = kind;
                ro.seed = rng.engine()();
                ro.truth = x;
                const auto r = decoders::recursive_decode_fpq(phi, decoders::PairwiseSigns::from_coefficients(phi * x), ro);
                for (std::size_t i = 1; i < r.raw_errors.size(); ++i)
                    worst_rise = std::max(worst_rise, r.raw_errors[i] - r.raw_errors[i - 1]);
            }
        out.push_back(at_most("recursive-error-monotone", worst_rise, 1e-12));
    }
    return out;
}

}  // namespace fpq::bench
