#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rdmac/binmat.hpp"
#include "rdmac/codes.hpp"
#include "rdmac/config.hpp"
#include "rdmac/csvfmt.hpp"
#include "rdmac/errors.hpp"
#include "rdmac/harness.hpp"

using rdmac::BerPoint;
using rdmac::Experiment;
using rdmac::Scheme;

namespace {

rdmac::CodePair small_pair(std::uint64_t seed = 5) {
    return rdmac::extend_re(rdmac::make_regular_ldpc(30, 60, 3, seed), {12, 3, seed, 10000});
}

Experiment base_experiment(Scheme scheme, std::vector<double> grid) {
    Experiment exp;
    exp.scheme = scheme;
    exp.pair = small_pair();
    exp.h1 = 1.5;
    exp.h2 = scheme == Scheme::single_user_ref ? 0.0 : 0.9;
    exp.snr_grid_db = std::move(grid);
    exp.max_blocks = 64;
    exp.min_error_events = 1000000;
    exp.master_seed = 41;
    exp.workers = 1;
    return exp;
}

bool same_point(const BerPoint& a, const BerPoint& b) {
    return a.snr_db == b.snr_db && a.blocks == b.blocks && a.errs1 == b.errs1 &&
           a.errs2 == b.errs2 && a.ber1 == b.ber1 && a.ber2 == b.ber2 && a.ber_avg == b.ber_avg &&
           a.avg_outer_iters == b.avg_outer_iters && a.error_events == b.error_events;
}

std::string slurp(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("scheme names round trip") {
    for (Scheme s : {Scheme::rdjd, Scheme::rdjd_noniter, Scheme::xorcd_2step, Scheme::sic,
                     Scheme::single_user_ref}) {
        CHECK(rdmac::scheme_from_name(rdmac::scheme_name(s)) == s);
    }
    CHECK(rdmac::scheme_name(Scheme::rdjd) == "rdjd");
    CHECK(rdmac::scheme_name(Scheme::rdjd_noniter) == "rdjd-noniter");
    CHECK(rdmac::scheme_name(Scheme::xorcd_2step) == "xorcd-2step");
    CHECK(rdmac::scheme_name(Scheme::sic) == "sic");
    CHECK(rdmac::scheme_name(Scheme::single_user_ref) == "single-user-ref");
    CHECK_THROWS_AS(rdmac::scheme_from_name("turbo"), rdmac::config_error);
}

TEST_CASE("noise-free points decode error-free for every scheme") {
    for (Scheme s : {Scheme::rdjd, Scheme::rdjd_noniter, Scheme::xorcd_2step, Scheme::sic,
                     Scheme::single_user_ref}) {
        Experiment exp = base_experiment(s, {80.0});
        exp.max_blocks = 20;
        const auto pts = rdmac::run_ber(exp);
        REQUIRE(pts.size() == 1);
        const auto& pt = pts.front();
        CHECK(pt.snr_db == 80.0);
        CHECK(pt.blocks == 20);
        CHECK(pt.errs1 == 0);
        CHECK(pt.errs2 == 0);
        CHECK(pt.ber1 == 0.0);
        CHECK(pt.ber2 == 0.0);
        CHECK(pt.ber_avg == 0.0);
        CHECK(pt.error_events == 0);
        if (s == Scheme::rdjd) {
            CHECK(pt.avg_outer_iters >= 1.0);
            CHECK(pt.avg_outer_iters <= 5.0);
        }
        if (s == Scheme::rdjd_noniter) CHECK(pt.avg_outer_iters == 1.0);
    }
}

TEST_CASE("run_ber validates its inputs") {
    Experiment exp = base_experiment(Scheme::rdjd, {});
    CHECK_THROWS_AS(rdmac::run_ber(exp), rdmac::config_error);
    exp.snr_grid_db = {1.0};
    exp.max_blocks = 0;
    CHECK_THROWS_AS(rdmac::run_ber(exp), rdmac::config_error);
}

TEST_CASE("results are byte-stable across worker counts") {
    Experiment exp = base_experiment(Scheme::rdjd, {1.0, 3.0});
    exp.max_blocks = 96;
    exp.min_error_events = 12; // trip the stop rule mid-chunk on the low point
    const auto one = rdmac::run_ber(exp);
    exp.workers = 4;
    const auto four = rdmac::run_ber(exp);
    REQUIRE(one.size() == four.size());
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(same_point(one[i], four[i]));

    const auto dir = std::filesystem::temp_directory_path();
    const auto f1 = dir / "rdmac_harness_w1.csv";
    const auto f4 = dir / "rdmac_harness_w4.csv";
    rdmac::write_results(exp, one, f1);
    rdmac::write_results(exp, four, f4);
    CHECK(slurp(f1) == slurp(f4));
    std::filesystem::remove(f1);
    std::filesystem::remove(f4);
}

TEST_CASE("master seed pins the run and different seeds move it") {
    Experiment exp = base_experiment(Scheme::rdjd, {0.0});
    const auto a = rdmac::run_ber(exp);
    const auto b = rdmac::run_ber(exp);
    REQUIRE(a.size() == 1);
    CHECK(same_point(a[0], b[0]));

    exp.master_seed = 42;
    const auto c = rdmac::run_ber(exp);
    CHECK_FALSE(same_point(a[0], c[0]));
}

TEST_CASE("stop rule caps effort at min_error_events") {
    Experiment exp = base_experiment(Scheme::rdjd, {0.0});
    exp.max_blocks = 4000;
    exp.min_error_events = 5;
    const auto pts = rdmac::run_ber(exp);
    const auto& pt = pts.front();
    CHECK(pt.error_events == 5);
    CHECK(pt.blocks < exp.max_blocks);
    CHECK(pt.error_events <= pt.blocks);

    exp.min_error_events = 1000000;
    exp.max_blocks = 48;
    const auto full = rdmac::run_ber(exp);
    CHECK(full.front().blocks == 48);
}

TEST_CASE("error accounting matches the definitions exactly") {
    Experiment exp = base_experiment(Scheme::rdjd, {0.0, 2.0});
    const auto pts = rdmac::run_ber(exp);
    const long k1 = rdmac::Encoder(exp.pair.h1).message_length();
    const long k2 = rdmac::Encoder(exp.pair.h2).message_length();
    for (const auto& pt : pts) {
        CHECK(pt.ber1 == static_cast<double>(pt.errs1) / (static_cast<double>(pt.blocks) * k1));
        CHECK(pt.ber2 == static_cast<double>(pt.errs2) / (static_cast<double>(pt.blocks) * k2));
        CHECK(pt.ber_avg == static_cast<double>(pt.errs1 + pt.errs2) /
                                (static_cast<double>(pt.blocks) * (k1 + k2)));
        CHECK(pt.errs1 <= pt.blocks * k1);
        CHECK(pt.errs2 <= pt.blocks * k2);
    }
}

TEST_CASE("snr grid splits concatenate into the full run") {
    Experiment whole = base_experiment(Scheme::xorcd_2step, {0.0, 2.5});
    const auto pts = rdmac::run_ber(whole);

    Experiment first = whole;
    first.snr_grid_db = {0.0};
    Experiment second = whole;
    second.snr_grid_db = {2.5};
    const auto pa = rdmac::run_ber(first);
    const auto pb = rdmac::run_ber(second);
    REQUIRE(pts.size() == 2);
    CHECK(same_point(pts[0], pa[0]));
    CHECK(same_point(pts[1], pb[0]));

    const auto dir = std::filesystem::temp_directory_path();
    const auto fw = dir / "rdmac_harness_whole.csv";
    const auto fs = dir / "rdmac_harness_split.csv";
    rdmac::write_results(whole, pts, fw);
    rdmac::write_results(first, pa, fs);
    rdmac::write_results(second, pb, fs, true);
    CHECK(slurp(fw) == slurp(fs));
    std::filesystem::remove(fw);
    std::filesystem::remove(fs);
}

TEST_CASE("write_results format contract") {
    Experiment exp = base_experiment(Scheme::rdjd_noniter, {1.5});
    const auto dir = std::filesystem::temp_directory_path();
    const auto file = dir / "rdmac_harness_fmt.csv";

    // Empty point list: header only.
    rdmac::write_results(exp, {}, file);
    CHECK(slurp(file) ==
          "scheme,construction,L,R1,R2,h1,h2,snr_db,blocks,errs1,errs2,ber1,ber2,ber_avg,"
          "avg_outer_iters,seed\n");

    const auto pts = rdmac::run_ber(exp);
    rdmac::write_results(exp, pts, file);
    std::ifstream in(file);
    std::string header, row;
    REQUIRE(std::getline(in, header));
    REQUIRE(std::getline(in, row));
    CHECK(header ==
          "scheme,construction,L,R1,R2,h1,h2,snr_db,blocks,errs1,errs2,ber1,ber2,ber_avg,"
          "avg_outer_iters,seed");

    std::vector<std::string> cells;
    std::stringstream ss(row);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    REQUIRE(cells.size() == 16);
    CHECK(cells[0] == "rdjd-noniter");
    CHECK(cells[1] == "re");
    CHECK(rdmac::parse_long(cells[2]) == exp.pair.block_length());
    // Decimal round-trip formatting: parsing recovers the doubles exactly.
    CHECK(rdmac::parse_double(cells[3]) == exp.pair.r1.value());
    CHECK(rdmac::parse_double(cells[4]) == exp.pair.r2.value());
    CHECK(rdmac::parse_double(cells[5]) == exp.h1);
    CHECK(rdmac::parse_double(cells[6]) == exp.h2);
    CHECK(rdmac::parse_double(cells[7]) == 1.5);
    CHECK(rdmac::parse_long(cells[8]) == pts[0].blocks);
    CHECK(rdmac::parse_long(cells[9]) == pts[0].errs1);
    CHECK(rdmac::parse_long(cells[10]) == pts[0].errs2);
    CHECK(rdmac::parse_double(cells[11]) == pts[0].ber1);
    CHECK(rdmac::parse_double(cells[12]) == pts[0].ber2);
    CHECK(rdmac::parse_double(cells[13]) == pts[0].ber_avg);
    CHECK(rdmac::parse_double(cells[14]) == pts[0].avg_outer_iters);
    CHECK(rdmac::parse_u64(cells[15]) == exp.master_seed);

    // Appending to a populated file must not repeat the header.
    rdmac::write_results(exp, pts, file, true);
    std::ifstream again(file);
    int headers = 0, rows = 0;
    std::string line;
    while (std::getline(again, line)) {
        if (line.rfind("scheme,", 0) == 0) headers += 1;
        else if (!line.empty()) rows += 1;
    }
    CHECK(headers == 1);
    CHECK(rows == 2);
    std::filesystem::remove(file);

    // Append to a missing file still writes the header.
    rdmac::write_results(exp, pts, file, true);
    CHECK(slurp(file).rfind("scheme,construction", 0) == 0);
    std::filesystem::remove(file);

    CHECK_THROWS_AS(rdmac::write_results(exp, pts, "/nonexistent_dir_rdmac/out.csv"),
                    rdmac::config_error);
}

TEST_CASE("rate_achieved reflects channel quality") {
    Experiment exp = base_experiment(Scheme::xorcd_2step, {0.0});
    CHECK(rdmac::rate_achieved(exp, 80.0, 50));
    CHECK_FALSE(rdmac::rate_achieved(exp, -10.0, 50));

    // Achievement never degrades with 2 dB more SNR (checked across seeds).
    for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
        Experiment probe = base_experiment(Scheme::single_user_ref, {0.0});
        probe.master_seed = seed;
        const bool low = rdmac::rate_achieved(probe, -4.5, 200);
        const bool high = rdmac::rate_achieved(probe, -2.5, 200);
        CHECK(static_cast<int>(high) >= static_cast<int>(low));
    }
}

TEST_CASE("find_waterfall_snr bisects the crossing") {
    Experiment exp = base_experiment(Scheme::single_user_ref, {0.0});
    rdmac::WaterfallSearch search;
    search.lo_db = -8.0;
    search.hi_db = 0.0;
    search.tol_db = 0.5;
    search.target_ber = 3e-4;
    search.max_blocks = 300;
    search.min_error_events = 30;

    const double s1 = rdmac::find_waterfall_snr(exp, search);
    CHECK(s1 > search.lo_db);
    CHECK(s1 < search.hi_db);
    CHECK(rdmac::find_waterfall_snr(exp, search) == s1);

    // A tighter tolerance refines within the coarser final interval.
    rdmac::WaterfallSearch fine = search;
    fine.tol_db = 0.25;
    CHECK(std::abs(rdmac::find_waterfall_snr(exp, fine) - s1) <= 0.5);

    // Brackets that do not straddle the target are rejected.
    rdmac::WaterfallSearch high = search;
    high.lo_db = 10.0;
    high.hi_db = 12.0;
    high.max_blocks = 100;
    high.min_error_events = 10;
    CHECK_THROWS_AS(rdmac::find_waterfall_snr(exp, high), rdmac::tolerance_error);
    rdmac::WaterfallSearch low = search;
    low.lo_db = -12.0;
    low.hi_db = -10.0;
    low.max_blocks = 100;
    low.min_error_events = 10;
    CHECK_THROWS_AS(rdmac::find_waterfall_snr(exp, low), rdmac::tolerance_error);
}

TEST_CASE("experiment_from_config resolves pairs and validates fields") {
    const auto dir = std::filesystem::temp_directory_path() / "rdmac_harness_cfg";
    std::filesystem::create_directories(dir / "mypair");
    rdmac::save_pair(small_pair(), dir / "mypair");

    const std::string text =
        "scheme = rdjd\n"
        "pair = mypair\n"
        "h1 = 1.5\n"
        "h2 = 0.9\n"
        "snr_db = 0.0, 1.0, 2.5\n"
        "max_blocks = 500\n"
        "min_error_events = 60\n"
        "master_seed = 7\n"
        "workers = 2\n";
    auto cfg = rdmac::KeyValueConfig::parse_string(text, "test");
    const Experiment exp = rdmac::experiment_from_config(cfg, dir);
    cfg.finish();
    CHECK(exp.scheme == Scheme::rdjd);
    CHECK(exp.pair.block_length() == 60);
    CHECK(exp.h1 == 1.5);
    CHECK(exp.h2 == 0.9);
    CHECK(exp.snr_grid_db == std::vector<double>{0.0, 1.0, 2.5});
    CHECK(exp.max_blocks == 500);
    CHECK(exp.min_error_events == 60);
    CHECK(exp.master_seed == 7);
    CHECK(exp.workers == 2);

    // Defaults fill in; a seed can arrive later from overrides.
    auto lean = rdmac::KeyValueConfig::parse_string(
        "scheme = sic\npair = " + (dir / "mypair").string() + "\nh1 = 1\nh2 = 1\nsnr_db = 3\n",
        "test");
    const Experiment d = rdmac::experiment_from_config(lean, dir / "elsewhere");
    lean.finish();
    CHECK(d.max_blocks == 10000);
    CHECK(d.min_error_events == 100);
    CHECK(d.master_seed == 0);
    CHECK(d.workers == 1);

    auto expect_config_error = [&](const std::string& body) {
        auto c = rdmac::KeyValueConfig::parse_string(body, "test");
        CHECK_THROWS_AS(rdmac::experiment_from_config(c, dir), rdmac::config_error);
    };
    const std::string head = "pair = mypair\nsnr_db = 1\n";
    expect_config_error("scheme = turbo\n" + head + "h1 = 1.5\nh2 = 0.9\n");
    expect_config_error("scheme = rdjd\n" + head + "h1 = 0.9\nh2 = 1.5\n");
    expect_config_error("scheme = single-user-ref\n" + head + "h1 = 1.5\nh2 = 0.9\n");
    expect_config_error("scheme = rdjd\npair = mypair\nsnr_db = 1, 1\nh1 = 1.5\nh2 = 0.9\n");
    expect_config_error("scheme = rdjd\npair = mypair\nsnr_db = 2, 1\nh1 = 1.5\nh2 = 0.9\n");
    expect_config_error("scheme = rdjd\n" + head + "h1 = 1.5\nh2 = 0.9\nmax_blocks = 0\n");
    expect_config_error("scheme = rdjd\n" + head + "h1 = 1.5\nh2 = 0.9\nmin_error_events = 0\n");
    expect_config_error("scheme = rdjd\npair = nowhere\nsnr_db = 1\nh1 = 1.5\nh2 = 0.9\n");
    expect_config_error(head + "h1 = 1.5\nh2 = 0.9\n"); // scheme missing

    // Unconsumed keys surface as typos through finish().
    auto typo = rdmac::KeyValueConfig::parse_string(
        "scheme = rdjd\n" + head + "h1 = 1.5\nh2 = 0.9\nmaster_sed = 3\n", "test");
    (void)rdmac::experiment_from_config(typo, dir);
    CHECK_THROWS_AS(typo.finish(), rdmac::config_error);

    std::filesystem::remove_all(dir);
}
