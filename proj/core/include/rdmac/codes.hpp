#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rdmac/binmat.hpp"

namespace rdmac {

struct Rate {
    int num = 0;
    int den = 1;
    double value() const { return static_cast<double>(num) / den; }
    std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
    bool operator==(const Rate&) const = default;
};

enum class Construction { re, rc };

// Nested code pair for the two-user channel. h1 checks the higher-rate user,
// h2 the lower-rate user, and the decoder split is h2 = common part hc plus
// appended part ha (for row-extension hc == h1 and ha holds the extra rows;
// for row-combining hc == h1 and ha holds the original uncombined rows).
// Rates are rank-effective: r = (n - rank) / n.
struct CodePair {
    BinMatrix h1, h2, hc, ha;
    Construction construction = Construction::re;
    Rate r1, r2;
    int rc_group_size = 0; // rows combined per group; 0 for row extension
    std::uint64_t seed = 0;
    int block_length() const { return h1.n_cols(); }
};

struct ReParams {
    int extra_rows = 0;
    int row_weight = 3;
    std::uint64_t seed = 0;
    long max_attempts_per_row = 10000;
    // When the base covers every column pair (the projective-plane matrix
    // does), no appended row of weight >= 2 can avoid a four-cycle against the
    // base. Setting this waives the clean-base precondition and the check of
    // appended rows against the base; appended rows stay four-cycle-free
    // among themselves.
    bool allow_base_cycles = false;
};

// Row extension: h2 = [h1; extra rows], extra rows drawn uniformly at random
// subject to keeping the stack free of four-cycles (scope reduced by
// allow_base_cycles for bases where that is unsatisfiable).
CodePair extend_re(const BinMatrix& h1, const ReParams& params);

struct RcParams {
    int group_size = 2;                   // rows combined per appended check
    std::vector<std::vector<int>> groups; // disjoint row-index groups of h2
};

// Row combining: h2 = [hd; hr] where hr holds the grouped rows; h1 replaces
// each group by the XOR of its rows. Rows of the returned h2 are reordered so
// grouped rows sit at the tail, in group order.
CodePair combine_rc(const BinMatrix& h2, const RcParams& params);

// Sample disjoint groups of rows that pairwise share no column and whose
// combined rows keep h1 four-cycle free.
std::vector<std::vector<int>> propose_rc_groups(const BinMatrix& h2, int group_size, int n_groups,
                                                std::uint64_t seed);

struct NestedReport {
    bool lower_in_common = false;  // c2 H_c^T = 0
    bool xor_in_common = false;    // (c1 xor c2) H_c^T = 0
    bool lower_in_appended = false; // c2 H_a^T = 0
    bool structure_ok = false;     // row bookkeeping matches the construction
    int trials = 0;
    std::string detail;
    bool all_ok() const {
        return lower_in_common && xor_in_common && lower_in_appended && structure_ok;
    }
};

NestedReport verify_nested(const CodePair& pair, int trials = 200, std::uint64_t seed = 1);

// Column-regular LDPC matrix with no four-cycles; row degrees balanced
// greedily.
BinMatrix make_regular_ldpc(int n_rows, int n_cols, int col_weight, std::uint64_t seed);

// Incidence matrix of the projective plane of order 16: 273 x 273, row and
// column weight 17, GF(2) rank 82, any two rows share exactly one column.
BinMatrix make_dsc273();

void save_pair(const CodePair& pair, const std::filesystem::path& dir);
CodePair load_pair(const std::filesystem::path& dir);

} // namespace rdmac
