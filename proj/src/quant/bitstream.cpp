#include "fpq/numkit/errors.hpp"
#include "fpq/quant.hpp"

namespace fpq::quant {

namespace {

constexpr std::size_t kHeaderBytes = 1 + 1 + 8;

}  // namespace

std::size_t fpq_payload_bits(const Composition& m, Variant v) {
    return psc::codeword_bits(psc::codebook_size(m, v, true));
}

Packed pack(const FpqCode& code, const Composition& m) {
    if (m.total() > 64) throw ContractError("pack: M above 64 is not supported by the header");
    if (code.variant == Variant::II && code.coded_signs != m.total() - m.last())
        throw ContractError("pack: FPQ codes carry exactly M - m_K sign bits");
    Packed p;
    p.payload_bits = fpq_payload_bits(m, code.variant);
    p.bytes.push_back(static_cast<std::uint8_t>(code.variant));
    p.bytes.push_back(static_cast<std::uint8_t>(m.total()));
    const std::uint64_t id = m.id();
    for (int i = 0; i < 8; ++i) p.bytes.push_back(static_cast<std::uint8_t>(id >> (8 * i)));

    const psc::BigInt rank = psc::rank_codeword(code, m);
    const std::size_t nbytes = (p.payload_bits + 7) / 8;
    p.bytes.resize(kHeaderBytes + nbytes, 0);
    for (std::size_t b = 0; b < p.payload_bits; ++b) {
        const unsigned bit = static_cast<unsigned>(p.payload_bits - 1 - b);
        if (bit_test(rank, bit)) p.bytes[kHeaderBytes + b / 8] |= static_cast<std::uint8_t>(0x80u >> (b % 8));
    }
    return p;
}

Unpacked unpack(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < kHeaderBytes) throw ShapeError("unpack: truncated header");
    if (bytes[0] != 1 && bytes[0] != 2) throw ContractError("unpack: unknown variant tag");
    const Variant v = static_cast<Variant>(bytes[0]);
    const std::size_t total = bytes[1];
    std::uint64_t id = 0;
    for (int i = 0; i < 8; ++i) id |= std::uint64_t{bytes[2 + i]} << (8 * i);
    const Composition m = Composition::from_id(total, id);
    const std::size_t bits = fpq_payload_bits(m, v);
    if (bytes.size() != kHeaderBytes + (bits + 7) / 8) throw ShapeError("unpack: payload length mismatch");
    psc::BigInt rank = 0;
    for (std::size_t b = 0; b < bits; ++b) {
        rank <<= 1;
        if (bytes[kHeaderBytes + b / 8] & (0x80u >> (b % 8))) rank += 1;
    }
    const std::size_t h = v == Variant::II ? total - m.last() : 0;
    return {m, psc::unrank_codeword(rank, m, v, h)};
}

}  // namespace fpq::quant
