#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "frislab/sweep.hpp"

namespace frislab {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

void write_csv(const SweepResult& result, std::ostream& out) {
    out << "snr_db,ber_sim,ci_lo,ci_hi,frames,bit_errors,ber_analytic\n";
    for (const SweepPoint& p : result.points) {
        out << fmt(p.snr_db) << ',';
        if (p.frames > 0)
            out << fmt(p.ber_sim) << ',' << fmt(p.ci_lo) << ',' << fmt(p.ci_hi) << ','
                << p.frames << ',' << p.bit_errors << ',';
        else
            out << ",,,,,";
        if (p.ber_analytic) out << fmt(*p.ber_analytic);
        out << '\n';
    }
}

void write_csv(const SweepResult& result, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open '" + path + "' for writing");
    write_csv(result, out);
    out.flush();
    if (!out) throw std::runtime_error("write_csv: write to '" + path + "' failed");
}

}  // namespace frislab
