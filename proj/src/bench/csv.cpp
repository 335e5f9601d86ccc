#include <cstdio>
#include <ostream>

#include "fpq/bench/experiments.hpp"

namespace fpq::bench {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

template <class T>
std::string joined(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(v[i]);
    }
    return s;
}

}  // namespace

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << "frame,N,M,variant,composition,rate_fixed,rate_entropy,mse,mse_stderr,trials,decoder\n";
    for (const auto& r : records)
        os << r.frame << ',' << r.n << ',' << r.m << ',' << static_cast<int>(r.variant) << ',' << r.composition << ','
           << format_double(r.rate_fixed) << ',' << format_double(r.rate_entropy) << ',' << format_double(r.mse) << ','
           << format_double(r.mse_stderr) << ',' << r.trials << ',' << r.decoder << '\n';
}

void write_decay_csv(std::ostream& os, const std::vector<DecayRecord>& records) {
    os << "N,M,strategy,projections,mse,mse_stderr,trials\n";
    for (const auto& r : records)
        os << r.n << ',' << r.m << ',' << r.strategy << ',' << format_double(r.projections) << ','
           << format_double(r.mse) << ',' << format_double(r.mse_stderr) << ',' << r.trials << '\n';
}

void write_cells_csv(std::ostream& os, const std::vector<CellRecord>& records) {
    os << "composition,index,order,signs,interior_margin,empty\n";
    for (const auto& r : records)
        os << r.composition << ',' << r.index << ',' << joined(r.order) << ',' << joined(r.signs) << ','
           << format_double(r.interior_margin) << ',' << (r.empty ? 1 : 0) << '\n';
}

void write_verify_csv(std::ostream& os, const std::vector<CheckResult>& records) {
    os << "check,result,measured,threshold\n";
    for (const auto& r : records)
        os << r.name << ',' << (r.pass ? "PASS" : "FAIL") << ',' << format_double(r.measured) << ','
           << format_double(r.threshold) << '\n';
}

}  // namespace fpq::bench
