#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frislab/analysis.hpp"
#include "frislab/channel.hpp"
#include "frislab/modem.hpp"

namespace frislab {

enum class DetectorKind { ml, greedy, list };
enum class CorrelationKind { jakes, identity };

/// Everything needed to run one BER sweep: geometry, frame layout, SNR
/// grid, stopping rule and seeding.
struct SweepSpec {
    FrisGeometry geometry;
    FrameConfig frame;
    std::vector<double> snr_db;
    std::int64_t min_frames = 10000;
    std::int64_t min_bit_errors = 200;
    std::int64_t max_frames = 2000000;
    std::uint64_t seed = 1;
    DetectorKind detector = DetectorKind::ml;
    CorrelationKind correlation = CorrelationKind::jakes;
    int workers = 0;  // 0 = hardware concurrency

    void validate() const;
};

struct SweepPoint {
    double snr_db = 0.0;
    double ber_sim = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::int64_t frames = 0;
    std::int64_t bit_errors = 0;
    std::optional<double> ber_analytic;
    double wall_time_s = 0.0;
};

struct SweepResult {
    std::vector<SweepPoint> points;
};

/// Monte Carlo sweep over the SNR grid. Each SNR point runs frames in
/// fixed-size batches until min_frames frames are done and min_bit_errors
/// bit errors are seen (or max_frames is hit); the committed batch count
/// depends only on cumulative counts, so results are identical for any
/// worker count. Per-frame streams derive from (seed, point, frame).
SweepResult run_sweep(const SweepSpec& spec);

/// Analytical union bound only (correlation field ignored; the bound is
/// defined for the identity-correlation baseline).
SweepResult analytic_only(const SweepSpec& spec);

/// Parse the flat sectioned key/value config format (see README). Unknown
/// sections or keys are rejected; messages carry the offending line.
SweepSpec parse_config(const std::string& text);

/// CSV contract: header `snr_db,ber_sim,ci_lo,ci_hi,frames,bit_errors,
/// ber_analytic`, one row per SNR point, 6 significant digits, empty
/// analytic cell when the bound does not apply.
void write_csv(const SweepResult& result, std::ostream& out);
void write_csv(const SweepResult& result, const std::string& path);

/// 95% Wilson score interval for a bit-error proportion.
std::pair<double, double> wilson_interval(std::int64_t errors, std::int64_t trials);

struct Preset {
    std::string name;
    std::string description;
    SweepSpec spec;
};

/// Figure-reproduction presets (geometry, frame and default budgets).
const std::vector<Preset>& list_presets();
const Preset& find_preset(const std::string& name);

}  // namespace frislab
