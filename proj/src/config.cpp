#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "frislab/sweep.hpp"

namespace frislab {

void SweepSpec::validate() const {
    geometry.validate();
    frame.validate();
    if (frame.k_sel > geometry.n_tot())
        throw std::invalid_argument("SweepSpec: K_sel exceeds N_tot");
    if (snr_db.empty()) throw std::invalid_argument("SweepSpec: snr_db must not be empty");
    if (min_frames < 1) throw std::invalid_argument("SweepSpec: min_frames must be >= 1");
    if (min_bit_errors < 0) throw std::invalid_argument("SweepSpec: min_bit_errors must be >= 0");
    if (max_frames < min_frames)
        throw std::invalid_argument("SweepSpec: max_frames must be >= min_frames");
    if (workers < 0) throw std::invalid_argument("SweepSpec: workers must be >= 0");
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

double parse_real(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        fail(line, "expected a number, got '" + v + "'");
    }
}

long long parse_int(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("");
        return x;
    } catch (...) {
        fail(line, "expected an integer, got '" + v + "'");
    }
}

// Accepts "a,b,c" lists and "start:step:stop" ranges.
std::vector<double> parse_snr_list(const std::string& v, int line) {
    std::vector<double> out;
    if (v.find(':') != std::string::npos) {
        std::stringstream ss(v);
        std::string part;
        std::vector<double> f;
        while (std::getline(ss, part, ':')) f.push_back(parse_real(trim(part), line));
        if (f.size() != 3) fail(line, "SNR range must be start:step:stop");
        const double start = f[0], step = f[1], stop = f[2];
        if (step == 0.0 || (stop - start) * step < 0.0) fail(line, "bad SNR range");
        for (double x = start; (step > 0) ? x <= stop + 1e-9 : x >= stop - 1e-9; x += step)
            out.push_back(x);
        return out;
    }
    std::stringstream ss(v);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        if (!part.empty()) out.push_back(parse_real(part, line));
    }
    if (out.empty()) fail(line, "empty SNR list");
    return out;
}

PhaseMode parse_phase(const std::string& v, int line) {
    const std::string s = lower(v);
    if (s == "continuous" || s == "cont") return PhaseMode::make_continuous();
    if (s.size() >= 2 && s[0] == 'q') {
        const long long q = parse_int(s.substr(1), line);
        if (q < 1 || q > 30) fail(line, "phase bits out of range");
        return PhaseMode::make_quantized(static_cast<int>(q));
    }
    fail(line, "phase must be 'continuous' or 'q<bits>'");
}

}  // namespace

SweepSpec parse_config(const std::string& text) {
    SweepSpec spec;
    spec.frame.n_r = 0;  // required keys tracked below
    std::set<std::string> seen;
    std::string section;
    std::stringstream ss(text);
    std::string raw;
    int line = 0;

    const std::map<std::string, std::set<std::string>> known = {
        {"geometry", {"n_x", "n_z", "d_x", "d_z"}},
        {"frame", {"n_r", "m", "k_sel", "phase", "list_size", "modulation"}},
        {"sweep",
         {"snr_db", "min_frames", "min_bit_errors", "max_frames", "seed", "detector",
          "correlation", "workers"}},
    };

    while (std::getline(ss, raw)) {
        ++line;
        std::string s = raw;
        const std::size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = lower(trim(s.substr(1, s.size() - 2)));
            if (!known.count(section)) fail(line, "unknown section '" + section + "'");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        if (section.empty()) fail(line, "key outside of any section");
        const std::string key = lower(trim(s.substr(0, eq)));
        const std::string value = trim(s.substr(eq + 1));
        if (!known.at(section).count(key))
            fail(line, "unknown key '" + key + "' in section [" + section + "]");
        seen.insert(section + "." + key);

        if (section == "geometry") {
            if (key == "n_x") spec.geometry.n_x = static_cast<int>(parse_int(value, line));
            else if (key == "n_z") spec.geometry.n_z = static_cast<int>(parse_int(value, line));
            else if (key == "d_x") spec.geometry.d_x = parse_real(value, line);
            else if (key == "d_z") spec.geometry.d_z = parse_real(value, line);
        } else if (section == "frame") {
            if (key == "n_r") spec.frame.n_r = static_cast<int>(parse_int(value, line));
            else if (key == "m") spec.frame.m = static_cast<int>(parse_int(value, line));
            else if (key == "k_sel") spec.frame.k_sel = static_cast<int>(parse_int(value, line));
            else if (key == "phase") spec.frame.phase_mode = parse_phase(value, line);
            else if (key == "list_size")
                spec.frame.list_size = static_cast<int>(parse_int(value, line));
            else if (key == "modulation") {
                const std::string m = lower(value);
                if (m == "auto") spec.frame.family = ConstellationFamily::automatic;
                else if (m == "psk") spec.frame.family = ConstellationFamily::psk;
                else if (m == "qam") spec.frame.family = ConstellationFamily::qam;
                else fail(line, "modulation must be auto, psk or qam");
            }
        } else if (section == "sweep") {
            if (key == "snr_db") spec.snr_db = parse_snr_list(value, line);
            else if (key == "min_frames") spec.min_frames = parse_int(value, line);
            else if (key == "min_bit_errors") spec.min_bit_errors = parse_int(value, line);
            else if (key == "max_frames") spec.max_frames = parse_int(value, line);
            else if (key == "seed")
                spec.seed = static_cast<std::uint64_t>(parse_int(value, line));
            else if (key == "workers") spec.workers = static_cast<int>(parse_int(value, line));
            else if (key == "detector") {
                const std::string d = lower(value);
                if (d == "ml") spec.detector = DetectorKind::ml;
                else if (d == "greedy") spec.detector = DetectorKind::greedy;
                else if (d == "list") spec.detector = DetectorKind::list;
                else fail(line, "detector must be ml, greedy or list");
            } else if (key == "correlation") {
                const std::string c = lower(value);
                if (c == "jakes") spec.correlation = CorrelationKind::jakes;
                else if (c == "identity") spec.correlation = CorrelationKind::identity;
                else fail(line, "correlation must be jakes or identity");
            }
        }
    }

    for (const char* req : {"geometry.n_x", "geometry.n_z", "frame.n_r", "frame.m",
                            "frame.k_sel", "sweep.snr_db"})
        if (!seen.count(req))
            throw std::invalid_argument(std::string("config: missing required key ") + req);
    if (!seen.count("frame.list_size")) spec.frame.list_size = spec.frame.n_r;

    if (spec.frame.k_sel > spec.geometry.n_tot())
        throw std::invalid_argument("config: K_sel exceeds N_tot");
    spec.validate();
    return spec;
}

std::pair<double, double> wilson_interval(std::int64_t errors, std::int64_t trials) {
    if (trials <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace frislab
