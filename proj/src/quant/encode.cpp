#include "fpq/numkit/errors.hpp"
#include "fpq/quant.hpp"

namespace fpq::quant {

FpqCode fpq_encode_v1(const Frame& f, const Composition& m, std::span<const double> x) {
    if (m.total() != f.size()) throw ShapeError("fpq_encode: composition total differs from M");
    return psc::encode_v1(f.expand(x), m);
}

FpqCode fpq_encode_v2(const Frame& f, const Composition& m, std::span<const double> x) {
    if (m.total() != f.size()) throw ShapeError("fpq_encode: composition total differs from M");
    return psc::encode_v2(f.expand(x), m, false);
}

FpqCode fpq_encode(const Frame& f, const Composition& m, std::span<const double> x, Variant v) {
    return v == Variant::I ? fpq_encode_v1(f, m, x) : fpq_encode_v2(f, m, x);
}

Vector canonical_decode(const Frame& f, const Composition& m, const InitialCodeword& mu, const FpqCode& code) {
    if (m.total() != f.size()) throw ShapeError("canonical_decode: composition total differs from M");
    if (mu.variant() != code.variant) throw ContractError("canonical_decode: initial codeword variant differs from code");
    const Vector y = psc::decode(code, mu, m);
    return f.pseudo_inverse() * y;
}

Matrix permuted_analysis(const Frame& f, const FpqCode& code) {
    const Matrix& a = f.analysis();
    if (code.order.size() != a.rows() || code.signs.size() != a.rows())
        throw ShapeError("permuted_analysis: code length differs from M");
    Matrix out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = code.signs[i] * a(code.order[i], j);
    return out;
}

double fpq_rate(const Composition& m, Variant v, std::size_t n) {
    if (n == 0 || n > m.total()) throw ShapeError("fpq_rate: need 1 <= N <= M");
    double bits = psc::log2_big(psc::codebook_size(m, Variant::I));
    if (v == Variant::II) bits += double(m.total() - m.last());
    return bits / double(n);
}

std::vector<FpqCode> all_codes(const Composition& m, Variant v) {
    const std::size_t h = v == Variant::II ? m.total() - m.last() : 0;
    const psc::BigInt size = psc::codebook_size(m, v, true);
    if (size > 10000000) throw ContractError("all_codes: codebook too large to enumerate");
    std::vector<FpqCode> out;
    for (psc::BigInt i = 0; i < size; ++i) out.push_back(psc::unrank_codeword(i, m, v, h));
    return out;
}

}  // namespace fpq::quant
