#include <cmath>
#include <sstream>

#include "fpq/numkit/errors.hpp"
#include "fpq/psc.hpp"

namespace fpq::psc {

Source parse_source(const std::string& name) {
    if (name == "uniform" || name == "uniform_box") return Source::UniformBox;
    if (name == "gaussian") return Source::Gaussian;
    if (name == "sphere" || name == "unit_sphere") return Source::UnitSphere;
    throw ContractError("unknown source tag: " + name);
}

std::string to_string(Source s) {
    switch (s) {
        case Source::UniformBox: return "uniform";
        case Source::Gaussian: return "gaussian";
        case Source::UnitSphere: return "sphere";
    }
    return "unknown";
}

Vector draw(Source s, numkit::Rng& rng, std::size_t n) {
    switch (s) {
        case Source::UniformBox: return rng.uniform_box(n);
        case Source::Gaussian: return rng.standard_gaussian(n);
        case Source::UnitSphere: return rng.uniform_unit_sphere(n);
    }
    throw ContractError("draw: unknown source");
}

Composition::Composition(std::vector<std::size_t> parts) : parts_(std::move(parts)) {
    if (parts_.empty()) throw ContractError("composition: needs at least one part");
    starts_.reserve(parts_.size());
    for (std::size_t p : parts_) {
        if (p == 0) throw ContractError("composition: parts must be positive");
        starts_.push_back(total_);
        total_ += p;
    }
}

Composition Composition::from_id(std::size_t total, std::uint64_t id) {
    if (total == 0 || total > 64) throw ContractError("composition: total must be in [1, 64]");
    if (total < 64 && (id >> (total - 1)) != 0) throw ContractError("composition: id out of range");
    std::vector<std::size_t> parts;
    std::size_t run = 1;
    for (std::size_t i = 0; i + 1 < total; ++i) {
        if ((id >> i) & 1u) {
            parts.push_back(run);
            run = 1;
        } else {
            ++run;
        }
    }
    parts.push_back(run);
    return Composition(std::move(parts));
}

std::vector<Composition> Composition::all(std::size_t total) {
    if (total == 0 || total > 24) throw ContractError("composition: enumeration limited to totals in [1, 24]");
    std::vector<Composition> out;
    const std::uint64_t count = std::uint64_t{1} << (total - 1);
    out.reserve(count);
    for (std::uint64_t id = 0; id < count; ++id) out.push_back(from_id(total, id));
    return out;
}

Composition Composition::parse(const std::string& text) {
    std::vector<std::size_t> parts;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, '-')) {
        if (tok.empty() || tok.find_first_not_of("0123456789") != std::string::npos)
            throw ContractError("composition: cannot parse \"" + text + "\"");
        parts.push_back(std::stoul(tok));
    }
    return Composition(std::move(parts));
}

std::vector<std::size_t> Composition::block_of_position() const {
    std::vector<std::size_t> out;
    out.reserve(total_);
    for (std::size_t i = 0; i < parts_.size(); ++i) out.insert(out.end(), parts_[i], i);
    return out;
}

std::uint64_t Composition::id() const {
    std::uint64_t id = 0;
    for (std::size_t i = 1; i < parts_.size(); ++i) id |= std::uint64_t{1} << (starts_[i] - 1);
    return id;
}

std::string Composition::to_string() const {
    std::string s;
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i > 0) s += '-';
        s += std::to_string(parts_[i]);
    }
    return s;
}

InitialCodeword::InitialCodeword(Vector values, Variant variant) : values_(std::move(values)), variant_(variant) {
    if (values_.empty()) throw ContractError("initial codeword: needs at least one value");
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) throw ContractError("initial codeword: values must be finite");
        if (i > 0 && !(values_[i - 1] > values_[i]))
            throw ContractError("initial codeword: values must be strictly descending");
    }
    if (variant_ == Variant::II && values_.back() < 0.0)
        throw ContractError("initial codeword: Variant II values must be nonnegative");
}

Vector InitialCodeword::expand(const Composition& n) const {
    if (n.blocks() != values_.size()) throw ShapeError("initial codeword: block count differs from composition");
    Vector out;
    out.reserve(n.total());
    for (std::size_t i = 0; i < values_.size(); ++i) out.insert(out.end(), n[i], values_[i]);
    return out;
}

}  // namespace fpq::psc
