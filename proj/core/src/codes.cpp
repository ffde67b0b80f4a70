#include "rdmac/codes.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "rdmac/alist.hpp"
#include "rdmac/errors.hpp"
#include "rdmac/rng.hpp"

namespace rdmac {

namespace {

std::uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

// Column-pair coverage of a growing row stack. A new row keeps the stack free
// of four-cycles iff none of its column pairs is already covered.
class PairGuard {
public:
    explicit PairGuard(const BinMatrix& m) {
        covered_.reserve(static_cast<std::size_t>(m.n_edges()) * 8);
        for (const auto& row : m.rows()) add_row(row);
    }

    bool row_ok(const std::vector<int>& row) const {
        for (std::size_t i = 0; i < row.size(); ++i) {
            for (std::size_t j = i + 1; j < row.size(); ++j) {
                if (covered_.count(pair_key(row[i], row[j]))) return false;
            }
        }
        return true;
    }

    void add_row(const std::vector<int>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            for (std::size_t j = i + 1; j < row.size(); ++j) {
                covered_.insert(pair_key(row[i], row[j]));
            }
        }
    }

private:
    std::unordered_set<std::uint64_t> covered_;
};

Rate effective_rate(const BinMatrix& h) {
    return Rate{h.n_cols() - rank_gf2(h), h.n_cols()};
}

std::vector<int> xor_disjoint_rows(const std::vector<std::vector<int>>& rows) {
    std::vector<int> merged;
    for (const auto& r : rows) merged.insert(merged.end(), r.begin(), r.end());
    std::sort(merged.begin(), merged.end());
    return merged;
}

} // namespace

CodePair extend_re(const BinMatrix& h1, const ReParams& params) {
    if (params.extra_rows < 0) throw construction_error("extend_re: extra_rows must be >= 0");
    if (params.row_weight < 1 || params.row_weight > h1.n_cols()) {
        throw construction_error("extend_re: row_weight out of range");
    }
    if (!params.allow_base_cycles && has_four_cycle(h1)) {
        throw construction_error("extend_re: base matrix already contains a four-cycle");
    }

    PairGuard guard(params.allow_base_cycles ? BinMatrix(0, h1.n_cols(), {}) : h1);
    Rng rng(mix_seed(params.seed, 0x7265656d, h1.n_rows()));
    std::vector<std::vector<int>> extra;
    extra.reserve(params.extra_rows);
    for (int r = 0; r < params.extra_rows; ++r) {
        long attempts = 0;
        while (true) {
            if (++attempts > params.max_attempts_per_row) {
                throw construction_error("extend_re: no four-cycle-free row of weight " +
                                         std::to_string(params.row_weight) + " found after " +
                                         std::to_string(attempts - 1) + " attempts (row " +
                                         std::to_string(r) + ")");
            }
            std::vector<int> row;
            row.reserve(params.row_weight);
            while (static_cast<int>(row.size()) < params.row_weight) {
                int c = static_cast<int>(rng.below(h1.n_cols()));
                if (std::find(row.begin(), row.end(), c) == row.end()) row.push_back(c);
            }
            std::sort(row.begin(), row.end());
            if (guard.row_ok(row)) {
                guard.add_row(row);
                extra.push_back(std::move(row));
                break;
            }
        }
    }

    CodePair pair;
    pair.h1 = h1;
    pair.ha = BinMatrix(params.extra_rows, h1.n_cols(), std::move(extra));
    pair.h2 = BinMatrix::vstack(h1, pair.ha);
    pair.hc = h1;
    pair.construction = Construction::re;
    pair.r1 = effective_rate(pair.h1);
    pair.r2 = effective_rate(pair.h2);
    pair.seed = params.seed;
    return pair;
}

CodePair combine_rc(const BinMatrix& h2, const RcParams& params) {
    if (params.group_size < 2) throw construction_error("combine_rc: group_size must be >= 2");
    if (params.groups.empty()) throw construction_error("combine_rc: no groups given");
    if (has_four_cycle(h2)) {
        throw construction_error("combine_rc: base matrix already contains a four-cycle");
    }

    std::vector<char> grouped(h2.n_rows(), 0);
    for (const auto& g : params.groups) {
        if (static_cast<int>(g.size()) != params.group_size) {
            throw construction_error("combine_rc: group size " + std::to_string(g.size()) +
                                     " != " + std::to_string(params.group_size));
        }
        for (int r : g) {
            if (r < 0 || r >= h2.n_rows()) {
                throw construction_error("combine_rc: row index " + std::to_string(r) +
                                         " out of range");
            }
            if (grouped[r]) {
                throw construction_error("combine_rc: row " + std::to_string(r) +
                                         " appears in more than one group");
            }
            grouped[r] = 1;
        }
        // Rows in a group must not share a column, otherwise the combined row
        // is not their disjoint union.
        std::vector<int> merged;
        for (int r : g) merged.insert(merged.end(), h2.row(r).begin(), h2.row(r).end());
        std::sort(merged.begin(), merged.end());
        auto dup = std::adjacent_find(merged.begin(), merged.end());
        if (dup != merged.end()) {
            throw construction_error("combine_rc: rows in a group share column " +
                                     std::to_string(*dup));
        }
    }

    std::vector<std::vector<int>> hd_rows;
    for (int r = 0; r < h2.n_rows(); ++r) {
        if (!grouped[r]) hd_rows.push_back(h2.row(r));
    }
    const int n_hd = static_cast<int>(hd_rows.size());

    std::vector<std::vector<int>> h1_rows = hd_rows;
    std::vector<std::vector<int>> h2_rows = std::move(hd_rows);
    std::vector<std::vector<int>> ha_rows;
    for (const auto& g : params.groups) {
        std::vector<std::vector<int>> members;
        for (int r : g) {
            members.push_back(h2.row(r));
            ha_rows.push_back(h2.row(r));
            h2_rows.push_back(h2.row(r));
        }
        h1_rows.push_back(xor_disjoint_rows(members));
    }

    CodePair pair;
    pair.h1 = BinMatrix(n_hd + static_cast<int>(params.groups.size()), h2.n_cols(),
                        std::move(h1_rows));
    pair.h2 = BinMatrix(h2.n_rows(), h2.n_cols(), std::move(h2_rows));
    const int n_ha = static_cast<int>(ha_rows.size());
    pair.ha = BinMatrix(n_ha, h2.n_cols(), std::move(ha_rows));
    pair.hc = pair.h1;
    pair.construction = Construction::rc;
    pair.rc_group_size = params.group_size;
    if (has_four_cycle(pair.h1)) {
        throw construction_error("combine_rc: combined rows introduce a four-cycle");
    }
    pair.r1 = effective_rate(pair.h1);
    pair.r2 = effective_rate(pair.h2);
    return pair;
}

std::vector<std::vector<int>> propose_rc_groups(const BinMatrix& h2, int group_size, int n_groups,
                                                std::uint64_t seed) {
    if (group_size < 2) throw construction_error("propose_rc_groups: group_size must be >= 2");
    if (n_groups * group_size > h2.n_rows()) {
        throw construction_error("propose_rc_groups: not enough rows");
    }
    if (has_four_cycle(h2)) {
        throw construction_error("propose_rc_groups: base matrix contains a four-cycle");
    }

    // In a four-cycle-free matrix each column pair is covered by at most one
    // row, so a combined row stays safe iff each of its column pairs is either
    // new or covered only by a row of its own group.
    std::unordered_map<std::uint64_t, int> coverer;
    for (int r = 0; r < h2.n_rows(); ++r) {
        const auto& row = h2.row(r);
        for (std::size_t i = 0; i < row.size(); ++i) {
            for (std::size_t j = i + 1; j < row.size(); ++j) {
                coverer[pair_key(row[i], row[j])] = r;
            }
        }
    }

    Rng rng(mix_seed(seed, 0x7263677270, h2.n_rows()));
    for (int restart = 0; restart < 40; ++restart) {
        std::vector<int> order(h2.n_rows());
        std::iota(order.begin(), order.end(), 0);
        for (int i = h2.n_rows() - 1; i > 0; --i) {
            std::swap(order[i], order[static_cast<int>(rng.below(i + 1))]);
        }

        std::vector<std::vector<int>> groups;
        std::vector<char> used(h2.n_rows(), 0);
        PairGuard combined_guard(BinMatrix(0, h2.n_cols(), {}));
        for (int start = 0; start < h2.n_rows() && static_cast<int>(groups.size()) < n_groups;
             ++start) {
            const int first = order[start];
            if (used[first]) continue;
            std::vector<int> group{first};
            for (int scan = start + 1;
                 scan < h2.n_rows() && static_cast<int>(group.size()) < group_size; ++scan) {
                const int cand = order[scan];
                if (used[cand]) continue;
                bool disjoint = true;
                for (int g : group) {
                    const auto& a = h2.row(g);
                    const auto& b = h2.row(cand);
                    std::vector<int> inter;
                    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                                          std::back_inserter(inter));
                    if (!inter.empty()) {
                        disjoint = false;
                        break;
                    }
                }
                if (!disjoint) continue;

                std::vector<int> trial = group;
                trial.push_back(cand);
                if (static_cast<int>(trial.size()) == group_size) {
                    std::vector<std::vector<int>> members;
                    for (int g : trial) members.push_back(h2.row(g));
                    auto combined = xor_disjoint_rows(members);
                    bool safe = combined_guard.row_ok(combined);
                    if (safe) {
                        for (std::size_t i = 0; i < combined.size() && safe; ++i) {
                            for (std::size_t j = i + 1; j < combined.size() && safe; ++j) {
                                auto it = coverer.find(pair_key(combined[i], combined[j]));
                                if (it != coverer.end() &&
                                    std::find(trial.begin(), trial.end(), it->second) ==
                                        trial.end()) {
                                    safe = false;
                                }
                            }
                        }
                    }
                    if (!safe) continue;
                    combined_guard.add_row(combined);
                    group = trial;
                    break;
                }
                group = trial;
            }
            if (static_cast<int>(group.size()) == group_size) {
                for (int g : group) used[g] = 1;
                std::sort(group.begin(), group.end());
                groups.push_back(std::move(group));
            }
        }
        if (static_cast<int>(groups.size()) == n_groups) return groups;
    }
    throw construction_error("propose_rc_groups: could not find " + std::to_string(n_groups) +
                             " valid groups");
}

namespace {

bool rows_match(const BinMatrix& a, int a_from, const BinMatrix& b, int b_from, int count) {
    for (int i = 0; i < count; ++i) {
        if (a.row(a_from + i) != b.row(b_from + i)) return false;
    }
    return true;
}

bool structure_ok(const CodePair& pair, std::string& detail) {
    if (pair.hc.n_cols() != pair.h1.n_cols() || pair.h2.n_cols() != pair.h1.n_cols() ||
        (pair.ha.n_rows() > 0 && pair.ha.n_cols() != pair.h1.n_cols())) {
        detail = "column counts differ between matrices";
        return false;
    }
    if (!(pair.hc == pair.h1)) {
        detail = "common matrix differs from h1";
        return false;
    }
    if (pair.construction == Construction::re) {
        if (pair.h2.n_rows() != pair.h1.n_rows() + pair.ha.n_rows() ||
            !rows_match(pair.h2, 0, pair.h1, 0, pair.h1.n_rows()) ||
            !rows_match(pair.h2, pair.h1.n_rows(), pair.ha, 0, pair.ha.n_rows())) {
            detail = "h2 is not [h1; ha]";
            return false;
        }
        return true;
    }
    const int lambda = pair.rc_group_size;
    if (lambda < 2 || pair.ha.n_rows() % lambda != 0) {
        detail = "invalid group size for row combining";
        return false;
    }
    const int n_groups = pair.ha.n_rows() / lambda;
    const int n_hd = pair.h2.n_rows() - pair.ha.n_rows();
    if (n_hd < 0 || pair.h1.n_rows() != n_hd + n_groups) {
        detail = "row counts inconsistent with row combining";
        return false;
    }
    if (!rows_match(pair.h1, 0, pair.h2, 0, n_hd) ||
        !rows_match(pair.h2, n_hd, pair.ha, 0, pair.ha.n_rows())) {
        detail = "shared rows of h1/h2/ha disagree";
        return false;
    }
    for (int g = 0; g < n_groups; ++g) {
        std::vector<std::vector<int>> members;
        for (int i = 0; i < lambda; ++i) members.push_back(pair.ha.row(g * lambda + i));
        if (pair.h1.row(n_hd + g) != xor_disjoint_rows(members)) {
            detail = "combined row " + std::to_string(g) + " is not the XOR of its group";
            return false;
        }
    }
    return true;
}

} // namespace

NestedReport verify_nested(const CodePair& pair, int trials, std::uint64_t seed) {
    NestedReport rep;
    rep.trials = trials;
    rep.structure_ok = structure_ok(pair, rep.detail);

    Encoder enc1(pair.h1);
    Encoder enc2(pair.h2);
    Rng rng(mix_seed(seed, 0x6e657374, pair.block_length()));

    rep.lower_in_common = rep.xor_in_common = rep.lower_in_appended = true;
    for (int t = 0; t < trials; ++t) {
        std::vector<std::uint8_t> u2(enc2.message_length());
        for (auto& b : u2) b = static_cast<std::uint8_t>(rng.bit());
        const auto c2 = enc2.encode_dense(u2);
        if (!syndrome_ok(c2, pair.hc)) {
            rep.lower_in_common = false;
            rep.detail = "trial " + std::to_string(t) + ": c2 fails a common-part check";
        }
        if (pair.ha.n_rows() > 0 && !syndrome_ok(c2, pair.ha)) {
            rep.lower_in_appended = false;
            rep.detail = "trial " + std::to_string(t) + ": c2 fails an appended-part check";
        }
        std::vector<std::uint8_t> u1(enc1.message_length());
        for (auto& b : u1) b = static_cast<std::uint8_t>(rng.bit());
        auto x = enc1.encode_dense(u1);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] ^= c2[i];
        if (!syndrome_ok(x, pair.hc)) {
            rep.xor_in_common = false;
            rep.detail = "trial " + std::to_string(t) + ": c1 xor c2 fails a common-part check";
        }
    }
    return rep;
}

BinMatrix make_regular_ldpc(int n_rows, int n_cols, int col_weight, std::uint64_t seed) {
    if (n_rows < col_weight || col_weight < 1) {
        throw construction_error("make_regular_ldpc: need n_rows >= col_weight >= 1");
    }
    Rng rng(mix_seed(seed, 0x72656773, (static_cast<std::uint64_t>(n_rows) << 20) ^ n_cols));

    for (int global_try = 0; global_try < 5; ++global_try) {
        std::vector<std::vector<int>> rows(n_rows);
        std::vector<int> degree(n_rows, 0);
        std::unordered_set<std::uint64_t> sharing; // row pairs that share a column
        sharing.reserve(static_cast<std::size_t>(n_cols) * col_weight * col_weight);
        bool failed = false;

        for (int c = 0; c < n_cols && !failed; ++c) {
            std::vector<int> chosen;
            for (int attempt = 0; attempt < 60; ++attempt) {
                chosen.clear();
                // Low-degree rows first, random tie-break.
                std::vector<std::pair<std::uint64_t, int>> cand(n_rows);
                for (int r = 0; r < n_rows; ++r) {
                    cand[r] = {(static_cast<std::uint64_t>(degree[r]) << 32) |
                                   (rng.next_u64() & 0xffffffffULL),
                               r};
                }
                std::sort(cand.begin(), cand.end());
                for (const auto& [key, r] : cand) {
                    bool ok = true;
                    for (int s : chosen) {
                        if (sharing.count(pair_key(r, s))) {
                            ok = false;
                            break;
                        }
                    }
                    if (ok) {
                        chosen.push_back(r);
                        if (static_cast<int>(chosen.size()) == col_weight) break;
                    }
                }
                if (static_cast<int>(chosen.size()) == col_weight) break;
            }
            if (static_cast<int>(chosen.size()) != col_weight) {
                failed = true;
                break;
            }
            for (std::size_t i = 0; i < chosen.size(); ++i) {
                for (std::size_t j = i + 1; j < chosen.size(); ++j) {
                    sharing.insert(pair_key(chosen[i], chosen[j]));
                }
                rows[chosen[i]].push_back(c);
                ++degree[chosen[i]];
            }
        }
        if (!failed) return BinMatrix(n_rows, n_cols, std::move(rows));
    }
    throw construction_error("make_regular_ldpc: placement failed repeatedly");
}

namespace {

std::string construction_name(Construction c) { return c == Construction::re ? "re" : "rc"; }

Construction construction_from(const std::string& s) {
    if (s == "re") return Construction::re;
    if (s == "rc") return Construction::rc;
    throw config_error("unknown construction '" + s + "'");
}

Rate parse_rate(const std::string& s) {
    const auto slash = s.find('/');
    if (slash == std::string::npos) throw config_error("rate must be 'num/den', got '" + s + "'");
    return Rate{std::stoi(s.substr(0, slash)), std::stoi(s.substr(slash + 1))};
}

} // namespace

void save_pair(const CodePair& pair, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_alist(dir / "h1.alist", pair.h1);
    write_alist(dir / "h2.alist", pair.h2);
    write_alist(dir / "hc.alist", pair.hc);
    write_alist(dir / "ha.alist", pair.ha);
    std::ofstream out(dir / "manifest.txt");
    if (!out) throw config_error("cannot write manifest in " + dir.string());
    out << "construction = " << construction_name(pair.construction) << '\n'
        << "block_length = " << pair.block_length() << '\n'
        << "r1 = " << pair.r1.str() << '\n'
        << "r2 = " << pair.r2.str() << '\n'
        << "rc_group_size = " << pair.rc_group_size << '\n'
        << "seed = " << pair.seed << '\n';
}

CodePair load_pair(const std::filesystem::path& dir) {
    CodePair pair;
    pair.h1 = read_alist(dir / "h1.alist");
    pair.h2 = read_alist(dir / "h2.alist");
    pair.hc = read_alist(dir / "hc.alist");
    pair.ha = read_alist(dir / "ha.alist");

    std::ifstream in(dir / "manifest.txt");
    if (!in) throw config_error("cannot open manifest in " + dir.string());
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw parse_error(line_no, "manifest line missing '='");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t");
            const auto b = s.find_last_not_of(" \t");
            return a == std::string::npos ? std::string{} : s.substr(a, b - a + 1);
        };
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key == "construction") pair.construction = construction_from(val);
        else if (key == "block_length") {
            if (std::stoi(val) != pair.h1.n_cols()) {
                throw config_error("manifest block_length disagrees with h1.alist");
            }
        } else if (key == "r1") pair.r1 = parse_rate(val);
        else if (key == "r2") pair.r2 = parse_rate(val);
        else if (key == "rc_group_size") pair.rc_group_size = std::stoi(val);
        else if (key == "seed") pair.seed = std::stoull(val);
        else throw parse_error(line_no, "unknown manifest key '" + key + "'");
    }

    std::string detail;
    if (!structure_ok(pair, detail)) {
        throw config_error("pair in " + dir.string() + " is inconsistent: " + detail);
    }
    if (Rate expect = effective_rate(pair.h1); expect.value() != pair.r1.value()) {
        throw config_error("manifest r1 " + pair.r1.str() + " != rank-effective " + expect.str());
    }
    if (Rate expect = effective_rate(pair.h2); expect.value() != pair.r2.value()) {
        throw config_error("manifest r2 " + pair.r2.str() + " != rank-effective " + expect.str());
    }
    return pair;
}

} // namespace rdmac
