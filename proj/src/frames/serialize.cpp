#include <cstdio>
#include <istream>
#include <ostream>
#include <string>

#include "fpq/frames.hpp"
#include "fpq/numkit/errors.hpp"

namespace fpq::frames {

void write_frame(std::ostream& os, const Frame& f) {
    const Matrix& a = f.analysis();
    os << a.rows() << ' ' << a.cols() << '\n';
    char buf[40];
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            std::snprintf(buf, sizeof buf, "%.17g", a(i, j));
            if (j > 0) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

Frame read_frame(std::istream& is) {
    long long m = -1, n = -1;
    if (!(is >> m >> n) || m <= 0 || n <= 0) throw ShapeError("read_frame: bad header, expected \"M N\"");
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(m * n));
    std::string tok;
    for (long long i = 0; i < m * n; ++i) {
        if (!(is >> tok)) throw ShapeError("read_frame: fewer entries than M*N");
        try {
            std::size_t used = 0;
            data.push_back(std::stod(tok, &used));
            if (used != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw ShapeError("read_frame: not a number: " + tok);
        }
    }
    if (is >> tok) throw ShapeError("read_frame: trailing data after M*N entries");
    return Frame(Matrix(static_cast<std::size_t>(m), static_cast<std::size_t>(n), std::move(data)));
}

}  // namespace fpq::frames
