#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "rdmac/alist.hpp"
#include "rdmac/codes.hpp"
#include "rdmac/errors.hpp"
#include "rdmac/rng.hpp"

using rdmac::BinMatrix;
using rdmac::CodePair;
using rdmac::Construction;

TEST_CASE("Rate arithmetic and formatting") {
    const rdmac::Rate r{191, 273};
    CHECK(r.value() == doctest::Approx(191.0 / 273.0));
    CHECK(r.str() == "191/273");
}

TEST_CASE("make_regular_ldpc is column regular and four-cycle free") {
    const auto h = rdmac::make_regular_ldpc(24, 56, 3, 7);
    CHECK(h.n_rows() == 24);
    CHECK(h.n_cols() == 56);
    for (const auto& col : h.cols()) CHECK(col.size() == 3);
    CHECK_FALSE(oracle::rows_share_two_columns(h));
    CHECK(h.n_edges() == 56 * 3);

    CHECK(rdmac::make_regular_ldpc(24, 56, 3, 7) == h);
    CHECK_FALSE(rdmac::make_regular_ldpc(24, 56, 3, 8) == h);

    CHECK_THROWS_AS(rdmac::make_regular_ldpc(2, 10, 3, 1), rdmac::construction_error);
    CHECK_THROWS_AS(rdmac::make_regular_ldpc(5, 10, 0, 1), rdmac::construction_error);
}

TEST_CASE("extend_re structure, rates and determinism") {
    const auto h1 = rdmac::make_regular_ldpc(8, 20, 2, 11);
    rdmac::ReParams params;
    params.extra_rows = 5;
    params.row_weight = 3;
    params.seed = 42;
    const auto pair = rdmac::extend_re(h1, params);

    CHECK(pair.construction == Construction::re);
    CHECK(pair.seed == 42);
    CHECK(pair.rc_group_size == 0);
    CHECK(pair.block_length() == 20);
    CHECK(pair.h1 == h1);
    CHECK(pair.hc == h1);
    CHECK(pair.ha.n_rows() == 5);
    for (const auto& row : pair.ha.rows()) CHECK(row.size() == 3);
    CHECK(pair.h2 == BinMatrix::vstack(h1, pair.ha));
    CHECK_FALSE(oracle::rows_share_two_columns(pair.h2));

    const int rank1 = oracle::dense_rank(oracle::dense_from(pair.h1));
    const int rank2 = oracle::dense_rank(oracle::dense_from(pair.h2));
    CHECK(pair.r1.num == 20 - rank1);
    CHECK(pair.r1.den == 20);
    CHECK(pair.r2.num == 20 - rank2);
    CHECK(pair.r2.den == 20);
    CHECK(pair.r1.value() >= pair.r2.value());

    const auto again = rdmac::extend_re(h1, params);
    CHECK(again.h2 == pair.h2);
    params.seed = 43;
    CHECK_FALSE(rdmac::extend_re(h1, params).h2 == pair.h2);
}

TEST_CASE("extend_re edge cases and failures") {
    const auto h1 = rdmac::make_regular_ldpc(6, 12, 2, 5);

    rdmac::ReParams none;
    none.extra_rows = 0;
    none.seed = 1;
    const auto pair = rdmac::extend_re(h1, none);
    CHECK(pair.h2 == h1);
    CHECK(pair.ha.n_rows() == 0);
    CHECK(pair.r1 == pair.r2);

    rdmac::ReParams bad;
    bad.extra_rows = 1;
    bad.row_weight = 13;
    CHECK_THROWS_AS(rdmac::extend_re(h1, bad), rdmac::construction_error);
    bad.row_weight = 0;
    CHECK_THROWS_AS(rdmac::extend_re(h1, bad), rdmac::construction_error);
    bad.extra_rows = -1;
    bad.row_weight = 3;
    CHECK_THROWS_AS(rdmac::extend_re(h1, bad), rdmac::construction_error);

    const BinMatrix cyclic(2, 12, {{0, 1, 2}, {1, 2, 3}});
    rdmac::ReParams one;
    one.extra_rows = 1;
    CHECK_THROWS_AS(rdmac::extend_re(cyclic, one), rdmac::construction_error);

    // Only one weight-3 row exists over 3 columns and it collides with the base.
    const BinMatrix tiny(1, 3, {{0, 1}});
    rdmac::ReParams stuck;
    stuck.extra_rows = 1;
    stuck.row_weight = 3;
    stuck.max_attempts_per_row = 50;
    CHECK_THROWS_AS(rdmac::extend_re(tiny, stuck), rdmac::construction_error);
}

TEST_CASE("row extension nests exhaustively on a small pair") {
    const auto h1 = rdmac::make_regular_ldpc(7, 14, 2, 3);
    rdmac::ReParams params;
    params.extra_rows = 4;
    params.row_weight = 3;
    params.seed = 9;
    const auto pair = rdmac::extend_re(h1, params);

    const auto dense_h1 = oracle::dense_from(pair.h1);
    const auto dense_ha = oracle::dense_from(pair.ha);
    const auto words = oracle::all_codewords(pair.h2);
    const int rank2 = oracle::dense_rank(oracle::dense_from(pair.h2));
    CHECK(static_cast<int>(words.size()) == 1 << (14 - rank2));
    for (const auto& c : words) {
        const auto s1 = oracle::dense_syndrome(dense_h1, c);
        const auto sa = oracle::dense_syndrome(dense_ha, c);
        CHECK(std::count(s1.begin(), s1.end(), 1) == 0);
        CHECK(std::count(sa.begin(), sa.end(), 1) == 0);
    }

    const auto rep = rdmac::verify_nested(pair, 100, 17);
    CHECK(rep.all_ok());
    CHECK(rep.trials == 100);
}

TEST_CASE("combine_rc on a hand-built example") {
    const BinMatrix base(4, 8, {{0, 1}, {2, 3}, {4, 5}, {6, 7}});
    rdmac::RcParams params;
    params.group_size = 2;
    params.groups = {{1, 3}};
    const auto pair = rdmac::combine_rc(base, params);

    CHECK(pair.construction == Construction::rc);
    CHECK(pair.rc_group_size == 2);
    // hd rows first, grouped rows reordered to the tail.
    CHECK(pair.h2.row(0) == std::vector<int>{0, 1});
    CHECK(pair.h2.row(1) == std::vector<int>{4, 5});
    CHECK(pair.h2.row(2) == std::vector<int>{2, 3});
    CHECK(pair.h2.row(3) == std::vector<int>{6, 7});
    CHECK(pair.ha.rows() == std::vector<std::vector<int>>{{2, 3}, {6, 7}});
    CHECK(pair.h1.rows() == std::vector<std::vector<int>>{{0, 1}, {4, 5}, {2, 3, 6, 7}});
    CHECK(pair.hc == pair.h1);
    CHECK(pair.r1.num == 8 - 3);
    CHECK(pair.r2.num == 8 - 4);

    // Exhaustive nesting: every codeword of h2 satisfies h1 and ha.
    const auto dense_h1 = oracle::dense_from(pair.h1);
    const auto dense_ha = oracle::dense_from(pair.ha);
    const auto words = oracle::all_codewords(pair.h2);
    CHECK(words.size() == 16);
    for (const auto& c : words) {
        const auto s1 = oracle::dense_syndrome(dense_h1, c);
        const auto sa = oracle::dense_syndrome(dense_ha, c);
        CHECK(std::count(s1.begin(), s1.end(), 1) == 0);
        CHECK(std::count(sa.begin(), sa.end(), 1) == 0);
    }
    CHECK(rdmac::verify_nested(pair, 100, 5).all_ok());
}

TEST_CASE("combine_rc rejects invalid groupings") {
    const BinMatrix base(4, 8, {{0, 1}, {1, 2}, {4, 5}, {6, 7}});

    rdmac::RcParams params;
    params.group_size = 2;

    params.groups = {{0, 1}};
    CHECK_THROWS_WITH_AS(rdmac::combine_rc(base, params),
                         doctest::Contains("share column"), rdmac::construction_error);

    params.groups = {{0, 2}, {2, 3}};
    CHECK_THROWS_WITH_AS(rdmac::combine_rc(base, params),
                         doctest::Contains("more than one group"), rdmac::construction_error);

    params.groups = {{0, 2, 3}};
    CHECK_THROWS_AS(rdmac::combine_rc(base, params), rdmac::construction_error);

    params.groups = {{0, 4}};
    CHECK_THROWS_AS(rdmac::combine_rc(base, params), rdmac::construction_error);

    params.groups = {};
    CHECK_THROWS_AS(rdmac::combine_rc(base, params), rdmac::construction_error);

    params.group_size = 1;
    params.groups = {{0}};
    CHECK_THROWS_AS(rdmac::combine_rc(base, params), rdmac::construction_error);

    // Both combined rows equal {0,1,2,3}: a four-cycle in the combined matrix.
    const BinMatrix clash(4, 8, {{0, 1}, {2, 3}, {0, 2}, {1, 3}});
    rdmac::RcParams bad;
    bad.group_size = 2;
    bad.groups = {{0, 1}, {2, 3}};
    CHECK_THROWS_WITH_AS(rdmac::combine_rc(clash, bad), doctest::Contains("four-cycle"),
                         rdmac::construction_error);
}

TEST_CASE("propose_rc_groups yields disjoint column-free groups") {
    const auto base = rdmac::make_regular_ldpc(30, 60, 2, 21);
    const auto groups = rdmac::propose_rc_groups(base, 2, 8, 77);
    CHECK(groups.size() == 8);

    std::set<int> seen;
    for (const auto& g : groups) {
        CHECK(g.size() == 2);
        for (int r : g) {
            CHECK(r >= 0);
            CHECK(r < 30);
            CHECK(seen.insert(r).second);
        }
        std::vector<int> inter;
        std::set_intersection(base.row(g[0]).begin(), base.row(g[0]).end(),
                              base.row(g[1]).begin(), base.row(g[1]).end(),
                              std::back_inserter(inter));
        CHECK(inter.empty());
    }

    rdmac::RcParams params;
    params.group_size = 2;
    params.groups = groups;
    const auto pair = rdmac::combine_rc(base, params);
    CHECK_FALSE(oracle::rows_share_two_columns(pair.h1));
    CHECK(rdmac::verify_nested(pair, 60, 3).all_ok());

    CHECK(rdmac::propose_rc_groups(base, 2, 8, 77) == groups);
    CHECK_THROWS_AS(rdmac::propose_rc_groups(base, 2, 16, 77), rdmac::construction_error);
}

TEST_CASE("verify_nested flags broken pairs") {
    const auto h1 = rdmac::make_regular_ldpc(7, 14, 2, 3);
    rdmac::ReParams params;
    params.extra_rows = 3;
    params.seed = 4;
    auto pair = rdmac::extend_re(h1, params);

    auto tampered = pair;
    tampered.ha = BinMatrix(3, 14, {{0, 4, 9}, {1, 5, 10}, {2, 6, 11}});
    const auto rep = rdmac::verify_nested(tampered, 80, 1);
    CHECK_FALSE(rep.structure_ok);
    CHECK_FALSE(rep.all_ok());
    CHECK_FALSE(rep.detail.empty());

    // h2 not nested inside h1 at all.
    CodePair fake;
    fake.h1 = BinMatrix(1, 6, {{0, 1}});
    fake.hc = fake.h1;
    fake.h2 = BinMatrix(1, 6, {{0, 2}});
    fake.ha = BinMatrix(0, 6, {});
    fake.construction = Construction::re;
    const auto rep2 = rdmac::verify_nested(fake, 60, 2);
    CHECK_FALSE(rep2.lower_in_common);
    CHECK_FALSE(rep2.all_ok());
}

TEST_CASE("save_pair and load_pair round trip") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "rdmac_test_codes";
    fs::remove_all(dir);

    const auto check_round_trip = [&](const CodePair& pair, const fs::path& sub) {
        rdmac::save_pair(pair, dir / sub);
        const auto loaded = rdmac::load_pair(dir / sub);
        CHECK(loaded.h1 == pair.h1);
        CHECK(loaded.h2 == pair.h2);
        CHECK(loaded.hc == pair.hc);
        CHECK(loaded.ha == pair.ha);
        CHECK(loaded.construction == pair.construction);
        CHECK(loaded.r1 == pair.r1);
        CHECK(loaded.r2 == pair.r2);
        CHECK(loaded.rc_group_size == pair.rc_group_size);
        CHECK(loaded.seed == pair.seed);
    };

    const auto h1 = rdmac::make_regular_ldpc(8, 20, 2, 11);
    rdmac::ReParams re;
    re.extra_rows = 5;
    re.row_weight = 3;
    re.seed = 42;
    check_round_trip(rdmac::extend_re(h1, re), "re");

    re.extra_rows = 0;
    check_round_trip(rdmac::extend_re(h1, re), "re_equal");

    const auto base = rdmac::make_regular_ldpc(30, 60, 2, 21);
    rdmac::RcParams rc;
    rc.group_size = 2;
    rc.groups = rdmac::propose_rc_groups(base, 2, 8, 77);
    check_round_trip(rdmac::combine_rc(base, rc), "rc");

    fs::remove_all(dir);
}

TEST_CASE("load_pair rejects inconsistent directories") {
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "rdmac_test_codes_bad";
    fs::remove_all(dir);

    const auto h1 = rdmac::make_regular_ldpc(7, 14, 2, 3);
    rdmac::ReParams params;
    params.extra_rows = 3;
    params.seed = 4;
    const auto pair = rdmac::extend_re(h1, params);

    rdmac::save_pair(pair, dir);
    CHECK_NOTHROW(rdmac::load_pair(dir));

    SUBCASE("missing manifest") {
        fs::remove(dir / "manifest.txt");
        CHECK_THROWS_AS(rdmac::load_pair(dir), rdmac::config_error);
    }
    SUBCASE("manifest rate disagrees with matrices") {
        std::ofstream(dir / "manifest.txt")
            << "construction = re\nblock_length = 14\nr1 = 1/2\nr2 = " << pair.r2.str()
            << "\nrc_group_size = 0\nseed = 4\n";
        CHECK_THROWS_AS(rdmac::load_pair(dir), rdmac::config_error);
    }
    SUBCASE("unknown manifest key") {
        std::ofstream(dir / "manifest.txt", std::ios::app) << "bogus = 1\n";
        CHECK_THROWS_AS(rdmac::load_pair(dir), rdmac::parse_error);
    }
    SUBCASE("appended matrix replaced") {
        rdmac::write_alist(dir / "ha.alist", BinMatrix(3, 14, {{0, 1, 2}, {3, 4, 5}, {6, 7, 8}}));
        CHECK_THROWS_AS(rdmac::load_pair(dir), rdmac::config_error);
    }
    fs::remove_all(dir);
}

TEST_CASE("projective-plane code has the documented structure") {
    const auto m = rdmac::make_dsc273();
    REQUIRE(m.n_rows() == 273);
    REQUIRE(m.n_cols() == 273);
    for (const auto& row : m.rows()) CHECK(row.size() == 17);
    for (const auto& col : m.cols()) CHECK(col.size() == 17);

    // Any two rows share exactly one column: no pair shares two (no four
    // cycle), and the 273 * C(17,2) incidences cover all C(273,2) pairs once.
    CHECK_FALSE(rdmac::has_four_cycle(m));
    long covered = 0;
    for (const auto& col : m.cols()) {
        covered += static_cast<long>(col.size()) * (static_cast<long>(col.size()) - 1) / 2;
    }
    CHECK(covered == 273L * 272L / 2L);

    CHECK(rdmac::rank_gf2(m) == 82);
    CHECK(oracle::dense_rank(oracle::dense_from(m)) == 82);
    CHECK(rdmac::Encoder(m).message_length() == 191);

    // Rows are the cyclic shifts of one difference-set line.
    for (int r = 0; r + 1 < 273; ++r) {
        std::vector<int> shifted;
        for (int c : m.row(r)) shifted.push_back((c + 1) % 273);
        std::sort(shifted.begin(), shifted.end());
        CHECK(m.row(r + 1) == shifted);
    }
}

TEST_CASE("row extension on the projective-plane base requires the cycle waiver") {
    const auto base = rdmac::make_dsc273();

    // The base covers every column pair, so any appended row of weight >= 2
    // four-cycles against it and the strict stack rule is unsatisfiable.
    rdmac::ReParams strict;
    strict.extra_rows = 1;
    strict.row_weight = 3;
    strict.seed = 7;
    strict.max_attempts_per_row = 200;
    CHECK_THROWS_AS(rdmac::extend_re(base, strict), rdmac::construction_error);

    rdmac::ReParams waived;
    waived.extra_rows = 80;
    waived.row_weight = 3;
    waived.seed = 7;
    waived.allow_base_cycles = true;
    const auto pair = rdmac::extend_re(base, waived);
    CHECK(pair.r1 == rdmac::Rate{191, 273});
    CHECK(pair.r2 == rdmac::Rate{111, 273});
    // The appended rows stay four-cycle-free among themselves; cycles against
    // the base are the unavoidable part the waiver permits.
    CHECK_FALSE(rdmac::has_four_cycle(pair.ha));
    CHECK(rdmac::has_four_cycle(pair.h2));
    CHECK(rdmac::verify_nested(pair, 100, 1).all_ok());

    // The waiver also admits a cycled stack as a base, so an extended stack
    // can be re-wrapped as an equal-rate pair.
    rdmac::ReParams wrap;
    wrap.extra_rows = 0;
    wrap.seed = 7;
    wrap.allow_base_cycles = true;
    const auto eq = rdmac::extend_re(pair.h2, wrap);
    CHECK(eq.r1 == eq.r2);
    CHECK(eq.r1 == pair.r2);
}
