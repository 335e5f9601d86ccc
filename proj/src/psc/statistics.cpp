#include <algorithm>
#include <cmath>
#include <functional>

#include "fpq/numkit/errors.hpp"
#include "fpq/psc.hpp"

namespace fpq::psc {

OrderStatistics sampled_order_statistics(const std::function<Vector(numkit::Rng&)>& sampler, bool magnitude,
                                         std::size_t trials, std::uint64_t seed) {
    if (trials == 0) throw ContractError("order statistics: trials must be positive");
    numkit::Rng rng(seed);
    Vector sum, sq;
    for (std::size_t t = 0; t < trials; ++t) {
        Vector v = sampler(rng);
        if (magnitude)
            for (double& x : v) x = std::abs(x);
        std::sort(v.begin(), v.end(), std::greater<>());
        if (t == 0) {
            sum.assign(v.size(), 0.0);
            sq.assign(v.size(), 0.0);
        } else if (v.size() != sum.size()) {
            throw ShapeError("order statistics: sampler changed its output length");
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            sum[i] += v[i];
            sq[i] += v[i] * v[i];
        }
    }
    OrderStatistics out;
    out.means.resize(sum.size());
    out.stderrs.resize(sum.size());
    const double t = double(trials);
    for (std::size_t i = 0; i < sum.size(); ++i) {
        out.means[i] = sum[i] / t;
        const double var = trials > 1 ? std::max(0.0, (sq[i] - t * out.means[i] * out.means[i]) / (t - 1.0)) : 0.0;
        out.stderrs[i] = std::sqrt(var / t);
    }
    return out;
}

OrderStatistics order_statistic_means(Source s, std::size_t n, bool magnitude, std::size_t trials, std::uint64_t seed) {
    if (n == 0) throw ShapeError("order statistics: N must be positive");
    if (s == Source::UniformBox) {
        OrderStatistics out;
        out.means.resize(n);
        out.stderrs.assign(n, 0.0);
        for (std::size_t l = 1; l <= n; ++l) {
            const double frac = double(n + 1 - l) / double(n + 1);
            out.means[l - 1] = magnitude ? 0.5 * frac : frac - 0.5;
        }
        return out;
    }
    if (s != Source::Gaussian) throw ContractError("order statistics: source must be uniform or gaussian");
    return sampled_order_statistics([n](numkit::Rng& r) { return r.standard_gaussian(n); }, magnitude, trials, seed);
}

InitialCodeword optimal_initial_codeword(const Composition& n, std::span<const double> means, Variant v) {
    if (means.size() != n.total()) throw ShapeError("optimal codeword: means length differs from composition total");
    for (std::size_t i = 1; i < means.size(); ++i)
        if (means[i] > means[i - 1]) throw ContractError("optimal codeword: means must be non-increasing");
    Vector mu(n.blocks());
    for (std::size_t i = 0; i < n.blocks(); ++i) {
        double s = 0.0;
        for (std::size_t l = n.start(i); l < n.start(i) + n[i]; ++l) s += means[l];
        mu[i] = s / double(n[i]);
    }
    return InitialCodeword(std::move(mu), v);  // rejects ties between blocks
}

Estimate psc_distortion(const Composition& n, const InitialCodeword& mu, Source s, std::size_t trials,
                        std::uint64_t seed) {
    if (trials == 0) throw ContractError("psc_distortion: trials must be positive");
    numkit::Rng rng(seed);
    const bool v2 = mu.variant() == Variant::II;
    const bool code_last = v2 && mu.values().back() > 0.0;
    double sum = 0.0, sq = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        const Vector x = draw(s, rng, n.total());
        const PermutationCode c = v2 ? encode_v2(x, n, code_last) : encode_v1(x, n);
        const Vector xh = decode(c, mu, n);
        double d = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) d += (x[i] - xh[i]) * (x[i] - xh[i]);
        d /= double(n.total());
        sum += d;
        sq += d * d;
    }
    const double tt = double(trials);
    Estimate e;
    e.mean = sum / tt;
    e.std_error = trials > 1 ? std::sqrt(std::max(0.0, (sq - tt * e.mean * e.mean) / (tt - 1.0)) / tt) : 0.0;
    return e;
}

}  // namespace fpq::psc
