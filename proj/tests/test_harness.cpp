#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <doctest.h>

#include "frislab/sweep.hpp"

using namespace frislab;

namespace {

const char* kMinimalConfig = R"(
[geometry]
n_x = 8
n_z = 8
d_x = 0.5
d_z = 0.5

[frame]
n_r = 4
m = 1
k_sel = 64

[sweep]
snr_db = -24, -22, -20
)";

SweepSpec tiny_spec() {
    SweepSpec spec;
    spec.geometry = {4, 4, 0.5, 0.5};
    spec.frame.n_r = 2;
    spec.frame.m = 2;
    spec.frame.k_sel = 8;
    spec.frame.list_size = 2;
    spec.snr_db = {-12.0};
    spec.min_frames = 2000;
    spec.min_bit_errors = 50;
    spec.max_frames = 20000;
    spec.seed = 7;
    spec.correlation = CorrelationKind::identity;
    return spec;
}

}  // namespace

TEST_CASE("parse_config applies defaults and validates") {
    SweepSpec spec = parse_config(kMinimalConfig);
    CHECK(spec.geometry.n_x == 8);
    CHECK(spec.frame.m == 1);
    CHECK(spec.frame.k_sel == 64);
    CHECK(spec.snr_db.size() == 3);
    CHECK(spec.detector == DetectorKind::ml);
    CHECK(spec.correlation == CorrelationKind::jakes);
    CHECK(spec.min_bit_errors == 200);
    CHECK(spec.frame.list_size == 4);  // defaults to n_r
    CHECK(!spec.frame.phase_mode.quantized());
}

TEST_CASE("parse_config rejects bad input with context") {
    std::string over = kMinimalConfig;
    over.replace(over.find("k_sel = 64"), 10, "k_sel = 100");
    CHECK_THROWS_WITH_AS(parse_config(over), doctest::Contains("K_sel exceeds N_tot"),
                         std::invalid_argument);

    CHECK_THROWS_WITH_AS(parse_config("[geometry]\nbogus = 1\n"),
                         doctest::Contains("unknown key 'bogus'"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("[nope]\n"), doctest::Contains("unknown section"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("x = 1\n"), doctest::Contains("line 1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("[frame]\nn_r = 4\n"),
                         doctest::Contains("missing required key"), std::invalid_argument);
    CHECK_THROWS_WITH_AS(parse_config("[sweep]\nsnr_db = 0:0:5\n"),
                         doctest::Contains("bad SNR range"), std::invalid_argument);
}

TEST_CASE("snr grid syntax") {
    std::string ranged = kMinimalConfig;
    ranged.replace(ranged.find("snr_db = -24, -22, -20"), 22, "snr_db = -24:2:-20");
    SweepSpec spec = parse_config(ranged);
    REQUIRE(spec.snr_db.size() == 3);
    CHECK(spec.snr_db[1] == doctest::Approx(-22.0));
}

TEST_CASE("presets expand to the documented parameters") {
    const Preset& dense_q2 = find_preset("fig3_dense_q2");
    CHECK(dense_q2.spec.geometry.n_x == 25);
    CHECK(dense_q2.spec.geometry.n_z == 10);
    CHECK(dense_q2.spec.geometry.d_x == doctest::Approx(0.1875));
    CHECK(dense_q2.spec.geometry.d_z == doctest::Approx(2.0 / 9.0));
    CHECK(dense_q2.spec.frame.k_sel == 50);
    CHECK(dense_q2.spec.frame.n_r == 4);
    CHECK(dense_q2.spec.frame.m == 4);
    CHECK(dense_q2.spec.frame.phase_mode.quantized());
    CHECK(dense_q2.spec.frame.phase_mode.q_bits == 2);

    const Preset& fig4 = find_preset("fig4_k60");
    CHECK(fig4.spec.geometry.n_tot() == 180);
    CHECK(fig4.spec.geometry.n_x == 15);
    CHECK(fig4.spec.geometry.n_z == 12);
    CHECK(fig4.spec.geometry.d_x == 2.0);
    CHECK(fig4.spec.frame.k_sel == 60);
    CHECK(fig4.spec.frame.n_r == 8);
    CHECK(fig4.spec.frame.m == 4);

    const Preset& fig6 = find_preset("fig6_L5");
    CHECK(fig6.spec.geometry.n_x == 20);
    CHECK(fig6.spec.geometry.n_z == 9);
    CHECK(fig6.spec.geometry.d_x == doctest::Approx(4.5 / 19.0));
    CHECK(fig6.spec.geometry.d_z == doctest::Approx(3.0 / 8.0));
    CHECK(fig6.spec.frame.n_r == 16);
    CHECK(fig6.spec.frame.m == 16);
    CHECK(fig6.spec.frame.k_sel == 70);
    CHECK(fig6.spec.frame.phase_mode.q_bits == 2);
    CHECK(fig6.spec.frame.list_size == 5);
    CHECK(fig6.spec.detector == DetectorKind::list);

    CHECK(list_presets().size() >= 26);
    for (const Preset& p : list_presets()) CHECK_NOTHROW(p.spec.validate());
    CHECK_THROWS_AS(find_preset("fig9_nope"), std::invalid_argument);
}

TEST_CASE("csv output shape and round trip") {
    SweepResult empty;
    std::ostringstream os;
    write_csv(empty, os);
    CHECK(os.str() == "snr_db,ber_sim,ci_lo,ci_hi,frames,bit_errors,ber_analytic\n");

    SweepResult one;
    SweepPoint p;
    p.snr_db = -21.5;
    p.ber_sim = 1.234567e-4;
    p.ci_lo = 1.1e-4;
    p.ci_hi = 1.4e-4;
    p.frames = 123456;
    p.bit_errors = 61;
    p.ber_analytic = 9.87654e-5;
    one.points.push_back(p);
    std::ostringstream os2;
    write_csv(one, os2);
    const std::string text = os2.str();
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);

    // Parse back and compare to 6 significant digits.
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);  // header
    std::getline(in, line);
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 7);
    CHECK(std::stod(cells[0]) == doctest::Approx(p.snr_db).epsilon(1e-6));
    CHECK(std::stod(cells[1]) == doctest::Approx(p.ber_sim).epsilon(1e-5));
    CHECK(std::stoll(cells[4]) == p.frames);
    CHECK(std::stod(cells[6]) == doctest::Approx(*p.ber_analytic).epsilon(1e-5));

    // Analytic-only rows leave the simulation cells empty.
    SweepResult analytic;
    SweepPoint ap;
    ap.snr_db = -20.0;
    ap.ber_analytic = 1e-3;
    analytic.points.push_back(ap);
    std::ostringstream os3;
    write_csv(analytic, os3);
    CHECK(os3.str().find("-20,,,,,,0.001") != std::string::npos);
}

TEST_CASE("run_sweep determinism and worker independence") {
    SweepSpec spec = tiny_spec();
    spec.workers = 1;
    SweepResult a = run_sweep(spec);
    SweepResult b = run_sweep(spec);
    REQUIRE(a.points.size() == 1);
    CHECK(a.points[0].bit_errors == b.points[0].bit_errors);
    CHECK(a.points[0].frames == b.points[0].frames);
    CHECK(a.points[0].ber_sim == b.points[0].ber_sim);

    spec.workers = 3;
    SweepResult c = run_sweep(spec);
    CHECK(a.points[0].bit_errors == c.points[0].bit_errors);
    CHECK(a.points[0].frames == c.points[0].frames);
}

TEST_CASE("run_sweep stopping rule") {
    SweepSpec spec = tiny_spec();
    SweepResult res = run_sweep(spec);
    const SweepPoint& p = res.points[0];
    CHECK(p.frames >= spec.min_frames);
    CHECK((p.bit_errors >= spec.min_bit_errors || p.frames >= spec.max_frames));
    CHECK(p.ci_lo <= p.ber_sim);
    CHECK(p.ci_hi >= p.ber_sim);

    // Wilson widths shrink with a 10x frame budget.
    SweepSpec big = spec;
    big.min_frames = 20000;
    big.min_bit_errors = 500;
    big.max_frames = 200000;
    SweepResult res2 = run_sweep(big);
    CHECK(res2.points[0].ci_hi - res2.points[0].ci_lo < p.ci_hi - p.ci_lo);
}

TEST_CASE("run_sweep is error free without noise") {
    SweepSpec spec = tiny_spec();
    spec.snr_db = {60.0};
    spec.min_frames = 1000;
    spec.min_bit_errors = 0;
    spec.max_frames = 1000;
    SweepResult res = run_sweep(spec);
    CHECK(res.points[0].bit_errors == 0);
    CHECK(res.points[0].ber_sim == 0.0);
}

TEST_CASE("full-size list detector sweep is identical to ml") {
    SweepSpec ml = tiny_spec();
    SweepSpec list = ml;
    list.detector = DetectorKind::list;
    list.frame.list_size = list.frame.n_r;
    SweepResult a = run_sweep(ml);
    SweepResult b = run_sweep(list);
    CHECK(a.points[0].bit_errors == b.points[0].bit_errors);
    CHECK(a.points[0].frames == b.points[0].frames);
}

TEST_CASE("analytic overlay present only under identity correlation") {
    SweepSpec spec = tiny_spec();
    spec.min_frames = 100;
    spec.min_bit_errors = 1;
    spec.max_frames = 1024;
    SweepResult res = run_sweep(spec);
    CHECK(res.points[0].ber_analytic.has_value());

    spec.correlation = CorrelationKind::jakes;
    SweepResult res2 = run_sweep(spec);
    CHECK(!res2.points[0].ber_analytic.has_value());

    SweepResult res3 = analytic_only(spec);
    CHECK(res3.points[0].ber_analytic.has_value());
    CHECK(res3.points[0].frames == 0);
}
