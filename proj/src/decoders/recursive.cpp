#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "fpq/decoders.hpp"
#include "fpq/numkit/errors.hpp"
#include "fpq/numkit/rng.hpp"

namespace fpq::decoders {

IndexSetKind parse_index_set_kind(const std::string& name) {
    if (name == "singleton") return IndexSetKind::Singleton;
    if (name == "sqrt") return IndexSetKind::Sqrt;
    if (name == "exhaustive") return IndexSetKind::Exhaustive;
    throw ContractError("unknown index-set strategy: " + name);
}

std::string to_string(IndexSetKind k) {
    switch (k) {
        case IndexSetKind::Singleton: return "singleton";
        case IndexSetKind::Sqrt: return "sqrt";
        case IndexSetKind::Exhaustive: return "exhaustive";
    }
    return "?";
}

PairwiseSigns PairwiseSigns::from_code(const FpqCode& code) {
    PairwiseSigns s;
    s.size_ = code.order.size();
    s.position_.assign(s.size_, s.size_);
    for (std::size_t p = 0; p < s.size_; ++p) {
        if (code.order[p] >= s.size_ || s.position_[code.order[p]] != s.size_)
            throw ContractError("PairwiseSigns: order is not a permutation");
        s.position_[code.order[p]] = p;
    }
    return s;
}

PairwiseSigns PairwiseSigns::from_coefficients(Vector y) {
    PairwiseSigns s;
    s.size_ = y.size();
    s.y_ = std::move(y);
    return s;
}

int PairwiseSigns::operator()(std::size_t k, std::size_t j) const {
    if (k >= size_ || j >= size_) throw ShapeError("PairwiseSigns: index out of range");
    if (!position_.empty()) return position_[k] < position_[j] ? 1 : (position_[k] > position_[j] ? -1 : 0);
    return y_[k] > y_[j] ? 1 : (y_[k] < y_[j] ? -1 : 0);
}

namespace {

// Indices (0-based) used at step k (0-based), in random visiting order.
void index_set(IndexSetKind kind, std::size_t k, numkit::Rng& rng, std::vector<std::size_t>& out) {
    out.clear();
    if (k == 0) return;
    switch (kind) {
        case IndexSetKind::Singleton:
            out.push_back(k - 1);
            return;
        case IndexSetKind::Exhaustive:
            for (std::size_t j = 0; j < k; ++j) out.push_back(j);
            break;
        case IndexSetKind::Sqrt: {
            // size floor(sqrt(k)) for the 1-based step k + 1, drawn by Floyd's method
            const auto want = std::min<std::size_t>(k, static_cast<std::size_t>(std::sqrt(double(k + 1))));
            std::unordered_set<std::size_t> seen;
            for (std::size_t r = k - want; r < k; ++r) {
                const std::size_t t = rng.below(r + 1);
                const std::size_t pick = seen.insert(t).second ? t : r;
                if (pick == r) seen.insert(r);
                out.push_back(pick);
            }
            break;
        }
    }
    std::shuffle(out.begin(), out.end(), rng.engine());
}

double distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

Vector normalized(const Vector& x) {
    const double len = numkit::norm(x);
    Vector out(x);
    if (len > 0.0)
        for (double& v : out) v /= len;
    return out;
}

}  // namespace

RecursiveResult recursive_decode_fpq(const Matrix& vectors, const PairwiseSigns& nu, const RecursiveOptions& opt) {
    const std::size_t m = vectors.rows(), n = vectors.cols();
    if (nu.size() != m) throw ShapeError("recursive_decode_fpq: sign data size differs from M");
    if (opt.truth && opt.truth->size() != n) throw ShapeError("recursive_decode_fpq: truth length differs from N");
    if (!std::is_sorted(opt.checkpoints.begin(), opt.checkpoints.end()))
        throw ContractError("recursive_decode_fpq: checkpoints must be ascending");

    numkit::Rng rng(opt.seed);
    if (opt.start && opt.start->size() != n) throw ShapeError("recursive_decode_fpq: start length differs from N");
    Vector x = opt.start ? *opt.start : rng.uniform_unit_sphere(n);
    RecursiveResult out;
    if (opt.truth) out.raw_errors.push_back(distance(*opt.truth, x));

    std::vector<std::size_t> set;
    Vector psi(n);
    std::size_t next = 0;
    auto snapshot = [&](std::size_t used) {
        while (next < opt.checkpoints.size() && opt.checkpoints[next] == used) {
            out.snapshots.push_back(normalized(x));
            out.snapshot_projections.push_back(out.result.projections);
            ++next;
        }
    };
    snapshot(1);
    for (std::size_t k = 1; k < m; ++k) {
        index_set(opt.kind, k, rng, set);
        const auto phik = vectors.row(k);
        for (const std::size_t j : set) {
            const int s = nu(k, j);
            if (s == 0) continue;
            const auto phij = vectors.row(j);
            double ip = 0.0, nrm2 = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                psi[i] = phik[i] - phij[i];
                ip += x[i] * psi[i];
                nrm2 += psi[i] * psi[i];
            }
            const int cur = ip > 0.0 ? 1 : (ip < 0.0 ? -1 : 0);
            if (cur == s || nrm2 == 0.0) continue;
            const double t = ip / nrm2;
            for (std::size_t i = 0; i < n; ++i) x[i] -= t * psi[i];
            ++out.result.projections;
            if (opt.truth) out.raw_errors.push_back(distance(*opt.truth, x));
        }
        snapshot(k + 1);
    }
    out.result.estimate = normalized(x);
    out.result.degenerate = numkit::norm(x) == 0.0;
    return out;
}

}  // namespace fpq::decoders
