#include <algorithm>
#include <array>
#include <vector>

#include "rdmac/codes.hpp"
#include "rdmac/errors.hpp"

namespace rdmac {

// PG(2,16) incidence matrix via a Singer difference set. Points of the plane
// are the 273 cosets of GF(16)* inside GF(2^12)*; the line spanned by {1, a}
// (a = primitive element) hits 17 cosets whose discrete logs mod 273 form a
// perfect difference set D, and every line is a cyclic shift of D.
BinMatrix make_dsc273() {
    constexpr int kField = 1 << 12;
    constexpr int kPoly = 0x1053; // x^12 + x^6 + x^4 + x + 1, primitive
    constexpr int kPoints = 273;  // (2^12 - 1) / 15

    std::vector<int> log_table(kField, -1);
    std::vector<int> exp_table(kField - 1, 0);
    int v = 1;
    for (int i = 0; i < kField - 1; ++i) {
        exp_table[i] = v;
        if (log_table[v] != -1) throw construction_error("dsc273: polynomial is not primitive");
        log_table[v] = i;
        v <<= 1;
        if (v & kField) v ^= kPoly;
    }

    // GF(16) inside GF(2^12): zero plus the order-15 subgroup.
    std::array<int, 16> subfield{};
    subfield[0] = 0;
    for (int k = 0; k < 15; ++k) subfield[k + 1] = exp_table[(kPoints * k) % (kField - 1)];

    // Coset indices of the nonzero points a + b*alpha, (a,b) != (0,0).
    std::vector<char> in_line(kPoints, 0);
    for (int ai = 0; ai < 16; ++ai) {
        for (int bi = 0; bi < 16; ++bi) {
            if (ai == 0 && bi == 0) continue;
            int beta = subfield[ai];
            if (bi != 0) beta ^= exp_table[(log_table[subfield[bi]] + 1) % (kField - 1)];
            in_line[log_table[beta] % kPoints] = 1;
        }
    }
    std::vector<int> base;
    for (int i = 0; i < kPoints; ++i) {
        if (in_line[i]) base.push_back(i);
    }
    if (base.size() != 17) throw construction_error("dsc273: difference set has wrong size");

    std::vector<std::vector<int>> rows(kPoints);
    for (int shift = 0; shift < kPoints; ++shift) {
        rows[shift].reserve(17);
        for (int d : base) rows[shift].push_back((d + shift) % kPoints);
        std::sort(rows[shift].begin(), rows[shift].end());
    }
    return BinMatrix(kPoints, kPoints, std::move(rows));
}

} // namespace rdmac
