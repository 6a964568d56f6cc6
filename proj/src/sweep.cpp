#include "frislab/sweep.hpp"

#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace frislab {

namespace {

constexpr std::int64_t kBatchFrames = 1024;

struct SweepContext {
    const SweepSpec& spec;
    CorrelationModel corr;
    Constellation constellation;
    int n_tot;
    int n_r;
    int bits_per_frame;
};

struct Workspace {
    ChannelRealization chan;
    std::vector<ReflectionConfig> configs;
    Eigen::VectorXcd y;
};

std::int64_t simulate_frame(const SweepContext& ctx, std::size_t point_index,
                            std::int64_t frame_index, double n0, Workspace& ws) {
    RandomStream rng = RandomStream::for_frame(ctx.spec.seed, point_index,
                                               static_cast<std::uint64_t>(frame_index));
    sample_channels_into(rng, ctx.n_tot, ctx.n_r, ctx.corr, ws.chan);
    for (int i = 0; i < ctx.n_r; ++i)
        ws.configs[i] = configure_mode(ws.chan, i, ctx.spec.frame.k_sel,
                                       ctx.spec.frame.phase_mode);
    const Eigen::MatrixXcd gains = effective_gain_matrix(ws.chan, ws.configs);

    const std::uint32_t word = static_cast<std::uint32_t>(rng.bits(ctx.bits_per_frame));
    const MappedFrame tx = map_word(word, ctx.spec.frame, ctx.constellation);
    ws.y = gains.col(tx.antenna) * tx.symbol;
    const double amp = std::sqrt(n0);
    for (int ell = 0; ell < ctx.n_r; ++ell) ws.y(ell) += amp * rng.complex_gaussian();

    DetectionResult det{};
    switch (ctx.spec.detector) {
        case DetectorKind::ml:
            det = detect_ml(ws.y, gains, ctx.constellation);
            break;
        case DetectorKind::greedy:
            det = detect_greedy(ws.y, gains, ctx.constellation);
            break;
        case DetectorKind::list:
            det = detect_list(ws.y, gains, ctx.constellation, ctx.spec.frame.list_size);
            break;
    }
    const std::uint32_t rx = frame_word(det.antenna, det.symbol_label, ctx.spec.frame);
    return std::popcount(word ^ rx);
}

struct PointTally {
    std::int64_t frames = 0;
    std::int64_t bit_errors = 0;
};

// Runs one SNR point. Batches are committed in index order and the stop
// decision looks only at committed cumulative counts, so the outcome does
// not depend on worker count or scheduling.
PointTally run_point(const SweepContext& ctx, std::size_t point_index, double n0, int workers) {
    const SweepSpec& spec = ctx.spec;
    const std::int64_t n_batches = (spec.max_frames + kBatchFrames - 1) / kBatchFrames;

    std::vector<std::int64_t> batch_errors(static_cast<std::size_t>(n_batches), 0);
    std::vector<char> batch_done(static_cast<std::size_t>(n_batches), 0);
    std::atomic<std::int64_t> next_batch{0};
    std::atomic<std::int64_t> stop_batch{-1};
    std::mutex commit_mutex;
    std::int64_t committed = 0;
    std::int64_t cum_frames = 0;
    std::int64_t cum_errors = 0;

    const auto frames_in_batch = [&spec](std::int64_t b) {
        const std::int64_t lo = b * kBatchFrames;
        return std::min(spec.max_frames, lo + kBatchFrames) - lo;
    };

    const auto worker = [&]() {
        Workspace ws;
        ws.configs.resize(ctx.n_r);
        while (true) {
            const std::int64_t b = next_batch.fetch_add(1);
            if (b >= n_batches) break;
            const std::int64_t sb = stop_batch.load();
            if (sb >= 0 && b > sb) break;
            const std::int64_t lo = b * kBatchFrames;
            const std::int64_t hi = lo + frames_in_batch(b);
            std::int64_t errors = 0;
            for (std::int64_t f = lo; f < hi; ++f)
                errors += simulate_frame(ctx, point_index, f, n0, ws);
            std::scoped_lock lock(commit_mutex);
            batch_errors[static_cast<std::size_t>(b)] = errors;
            batch_done[static_cast<std::size_t>(b)] = 1;
            while (committed < n_batches && batch_done[static_cast<std::size_t>(committed)]) {
                cum_frames += frames_in_batch(committed);
                cum_errors += batch_errors[static_cast<std::size_t>(committed)];
                if (stop_batch.load() < 0 &&
                    ((cum_frames >= spec.min_frames && cum_errors >= spec.min_bit_errors) ||
                     cum_frames >= spec.max_frames))
                    stop_batch.store(committed);
                ++committed;
            }
        }
    };

    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const std::int64_t last = stop_batch.load() >= 0 ? stop_batch.load() : n_batches - 1;
    PointTally tally;
    for (std::int64_t b = 0; b <= last; ++b) {
        tally.frames += frames_in_batch(b);
        tally.bit_errors += batch_errors[static_cast<std::size_t>(b)];
    }
    return tally;
}

EffectiveStats stats_for(const SweepSpec& spec) {
    const double p_sel =
        static_cast<double>(spec.frame.k_sel) / static_cast<double>(spec.geometry.n_tot());
    if (spec.frame.phase_mode.quantized())
        return quantized_stats(p_sel, spec.frame.phase_mode.q_bits);
    return continuous_stats(p_sel);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
    spec.validate();
    SweepContext ctx{spec,
                     spec.correlation == CorrelationKind::identity
                         ? CorrelationModel::make_identity(spec.geometry.n_tot())
                         : build_jakes_correlation(spec.geometry),
                     make_constellation(spec.frame.m, spec.frame.family),
                     spec.geometry.n_tot(),
                     spec.frame.n_r,
                     spec.frame.bits_per_frame()};

    int workers = spec.workers;
    if (workers == 0) workers = static_cast<int>(std::thread::hardware_concurrency());
    if (workers < 1) workers = 1;

    std::optional<EffectiveStats> stats;
    if (spec.correlation == CorrelationKind::identity) stats = stats_for(spec);

    SweepResult result;
    for (std::size_t pi = 0; pi < spec.snr_db.size(); ++pi) {
        const double snr = spec.snr_db[pi];
        const double n0 = std::pow(10.0, -snr / 10.0);
        const auto t0 = std::chrono::steady_clock::now();
        const PointTally tally = run_point(ctx, pi, n0, workers);
        const auto t1 = std::chrono::steady_clock::now();

        SweepPoint point;
        point.snr_db = snr;
        point.frames = tally.frames;
        point.bit_errors = tally.bit_errors;
        const std::int64_t bits = tally.frames * ctx.bits_per_frame;
        point.ber_sim = bits > 0 ? static_cast<double>(tally.bit_errors) / bits : 0.0;
        std::tie(point.ci_lo, point.ci_hi) = wilson_interval(tally.bit_errors, bits);
        if (stats) point.ber_analytic = union_bound_ber(spec.frame, *stats, n0);
        point.wall_time_s = std::chrono::duration<double>(t1 - t0).count();
        result.points.push_back(point);
    }
    return result;
}

SweepResult analytic_only(const SweepSpec& spec) {
    spec.validate();
    const EffectiveStats stats = stats_for(spec);
    SweepResult result;
    for (double snr : spec.snr_db) {
        SweepPoint point;
        point.snr_db = snr;
        point.ber_analytic = union_bound_ber(spec.frame, stats, std::pow(10.0, -snr / 10.0));
        result.points.push_back(point);
    }
    return result;
}

}  // namespace frislab
