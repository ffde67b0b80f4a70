#include "rdmac/binmat.hpp"

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "rdmac/errors.hpp"

namespace rdmac {

namespace {

std::vector<int> canonicalize(std::vector<int> idx, int limit, const char* what) {
    for (int v : idx) {
        if (v < 0 || v >= limit) {
            throw dimension_error(std::string(what) + " index " + std::to_string(v) +
                                  " out of range [0, " + std::to_string(limit) + ")");
        }
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

int words_for(int bits) { return (bits + 63) / 64; }

std::vector<std::uint64_t> to_words(const std::vector<int>& support, int n_bits) {
    std::vector<std::uint64_t> w(words_for(n_bits), 0);
    for (int i : support) w[i >> 6] ^= std::uint64_t{1} << (i & 63);
    return w;
}

void xor_into(std::vector<std::uint64_t>& dst, const std::vector<std::uint64_t>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

bool get_bit(const std::vector<std::uint64_t>& w, int i) {
    return (w[i >> 6] >> (i & 63)) & 1;
}

} // namespace

BinVector::BinVector(int length_in, std::vector<int> support_in) : length(length_in) {
    if (length < 0) throw dimension_error("BinVector length must be nonnegative");
    support = canonicalize(std::move(support_in), length, "BinVector");
}

BinVector BinVector::from_dense(std::span<const std::uint8_t> bits) {
    BinVector v;
    v.length = static_cast<int>(bits.size());
    for (int i = 0; i < v.length; ++i) {
        if (bits[i]) v.support.push_back(i);
    }
    return v;
}

std::vector<std::uint8_t> BinVector::to_dense() const {
    std::vector<std::uint8_t> bits(length, 0);
    for (int i : support) bits[i] = 1;
    return bits;
}

bool BinVector::get(int i) const {
    if (i < 0 || i >= length) throw dimension_error("BinVector::get index out of range");
    return std::binary_search(support.begin(), support.end(), i);
}

BinVector operator^(const BinVector& a, const BinVector& b) {
    if (a.length != b.length) throw dimension_error("BinVector XOR length mismatch");
    BinVector out;
    out.length = a.length;
    std::set_symmetric_difference(a.support.begin(), a.support.end(), b.support.begin(),
                                  b.support.end(), std::back_inserter(out.support));
    return out;
}

BinMatrix::BinMatrix(int n_rows, int n_cols, std::vector<std::vector<int>> rows)
    : n_rows_(n_rows), n_cols_(n_cols), rows_(std::move(rows)) {
    if (n_rows_ < 0 || n_cols_ <= 0) throw dimension_error("BinMatrix shape must be r>=0, c>0");
    if (static_cast<int>(rows_.size()) != n_rows_) {
        throw dimension_error("BinMatrix row count mismatch: declared " + std::to_string(n_rows_) +
                              ", got " + std::to_string(rows_.size()));
    }
    cols_.assign(n_cols_, {});
    for (int r = 0; r < n_rows_; ++r) {
        rows_[r] = canonicalize(std::move(rows_[r]), n_cols_, "BinMatrix column");
        n_edges_ += static_cast<long>(rows_[r].size());
        for (int c : rows_[r]) cols_[c].push_back(r);
    }
}

BinMatrix BinMatrix::take_rows(std::span<const int> idx) const {
    std::vector<std::vector<int>> out;
    out.reserve(idx.size());
    for (int i : idx) {
        if (i < 0 || i >= n_rows_) throw dimension_error("take_rows index out of range");
        out.push_back(rows_[i]);
    }
    return BinMatrix(static_cast<int>(idx.size()), n_cols_, std::move(out));
}

BinMatrix BinMatrix::vstack(const BinMatrix& top, const BinMatrix& bottom) {
    if (top.n_cols() != bottom.n_cols()) throw dimension_error("vstack column count mismatch");
    std::vector<std::vector<int>> rows = top.rows();
    rows.insert(rows.end(), bottom.rows().begin(), bottom.rows().end());
    return BinMatrix(top.n_rows() + bottom.n_rows(), top.n_cols(), std::move(rows));
}

BinVector syndrome(const BinVector& c, const BinMatrix& h) {
    if (c.length != h.n_cols()) throw dimension_error("syndrome: vector length != matrix columns");
    BinVector s;
    s.length = h.n_rows();
    for (int r = 0; r < h.n_rows(); ++r) {
        const auto& row = h.row(r);
        int parity = 0;
        auto it = c.support.begin();
        for (int col : row) {
            it = std::lower_bound(it, c.support.end(), col);
            if (it == c.support.end()) break;
            if (*it == col) {
                parity ^= 1;
                ++it;
            }
        }
        if (parity) s.support.push_back(r);
    }
    return s;
}

bool syndrome_ok(std::span<const std::uint8_t> c, const BinMatrix& h) {
    if (static_cast<int>(c.size()) != h.n_cols()) {
        throw dimension_error("syndrome_ok: vector length != matrix columns");
    }
    for (const auto& row : h.rows()) {
        std::uint8_t parity = 0;
        for (int col : row) parity ^= c[col];
        if (parity) return false;
    }
    return true;
}

int rank_gf2(const BinMatrix& h) {
    const int w = words_for(h.n_cols());
    std::vector<std::vector<std::uint64_t>> basis; // reduced independent rows
    std::vector<int> lead;                         // leading bit of each basis row
    basis.reserve(std::min(h.n_rows(), h.n_cols()));
    for (const auto& row : h.rows()) {
        auto buf = to_words(row, h.n_cols());
        for (std::size_t b = 0; b < basis.size(); ++b) {
            if (get_bit(buf, lead[b])) xor_into(buf, basis[b]);
        }
        int first = -1;
        for (int word = 0; word < w && first < 0; ++word) {
            if (buf[word]) first = word * 64 + std::countr_zero(buf[word]);
        }
        if (first >= 0) {
            basis.push_back(std::move(buf));
            lead.push_back(first);
        }
    }
    return static_cast<int>(basis.size());
}

bool has_four_cycle(const BinMatrix& h) {
    // Two rows sharing >= 2 columns show up as a repeated row pair across the
    // column adjacency lists.
    std::unordered_set<std::uint64_t> seen;
    seen.reserve(static_cast<std::size_t>(h.n_edges()) * 2);
    for (const auto& col : h.cols()) {
        for (std::size_t i = 0; i < col.size(); ++i) {
            for (std::size_t j = i + 1; j < col.size(); ++j) {
                const std::uint64_t key =
                    (static_cast<std::uint64_t>(col[i]) << 32) | static_cast<std::uint32_t>(col[j]);
                if (!seen.insert(key).second) return true;
            }
        }
    }
    return false;
}

Encoder::Encoder(const BinMatrix& h) : n_(h.n_cols()) {
    const int w = words_for(n_);
    std::vector<std::vector<std::uint64_t>> rows;
    rows.reserve(h.n_rows());
    for (const auto& row : h.rows()) rows.push_back(to_words(row, n_));

    // Gauss-Jordan elimination; pivot columns taken in natural order.
    std::vector<int> pivot_cols;
    std::vector<int> pivot_rows;
    std::vector<char> row_used(rows.size(), 0);
    for (int col = 0; col < n_; ++col) {
        int pick = -1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (!row_used[r] && get_bit(rows[r], col)) {
                pick = static_cast<int>(r);
                break;
            }
        }
        if (pick < 0) continue;
        row_used[pick] = 1;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (static_cast<int>(r) != pick && get_bit(rows[r], col)) {
                xor_into(rows[r], rows[pick]);
            }
        }
        pivot_cols.push_back(col);
        pivot_rows.push_back(pick);
    }

    const int rank = static_cast<int>(pivot_cols.size());
    k_ = n_ - rank;

    std::vector<char> is_pivot(n_, 0);
    for (int c : pivot_cols) is_pivot[c] = 1;
    message_positions_.reserve(k_);
    for (int c = 0; c < n_; ++c) {
        if (!is_pivot[c]) message_positions_.push_back(c);
    }

    column_permutation_.reserve(n_);
    column_permutation_ = pivot_cols;
    column_permutation_.insert(column_permutation_.end(), message_positions_.begin(),
                               message_positions_.end());

    // Codeword for message bit j: 1 at the j-th free column, and for each
    // pivot row i the RREF entry at that free column lands on pivot column i.
    gen_words_.assign(k_, std::vector<std::uint64_t>(w, 0));
    std::vector<std::vector<int>> gen_rows(k_);
    for (int j = 0; j < k_; ++j) {
        const int free_col = message_positions_[j];
        auto& words = gen_words_[j];
        words[free_col >> 6] ^= std::uint64_t{1} << (free_col & 63);
        for (int i = 0; i < rank; ++i) {
            if (get_bit(rows[pivot_rows[i]], free_col)) {
                words[pivot_cols[i] >> 6] ^= std::uint64_t{1} << (pivot_cols[i] & 63);
            }
        }
        for (int c = 0; c < n_; ++c) {
            if (get_bit(words, c)) gen_rows[j].push_back(c);
        }
    }
    generator_ = BinMatrix(k_, n_, std::move(gen_rows));
}

BinVector Encoder::encode(std::span<const std::uint8_t> message) const {
    return BinVector::from_dense(encode_dense(message));
}

std::vector<std::uint8_t> Encoder::encode_dense(std::span<const std::uint8_t> message) const {
    if (static_cast<int>(message.size()) != k_) {
        throw dimension_error("encode: message length " + std::to_string(message.size()) +
                              " != " + std::to_string(k_));
    }
    std::vector<std::uint64_t> acc(words_for(n_), 0);
    for (int j = 0; j < k_; ++j) {
        if (message[j]) xor_into(acc, gen_words_[j]);
    }
    std::vector<std::uint8_t> out(n_);
    for (int i = 0; i < n_; ++i) out[i] = get_bit(acc, i);
    return out;
}

std::vector<std::uint8_t> Encoder::extract_message(std::span<const std::uint8_t> codeword) const {
    if (static_cast<int>(codeword.size()) != n_) {
        throw dimension_error("extract_message: codeword length mismatch");
    }
    std::vector<std::uint8_t> out(k_);
    for (int j = 0; j < k_; ++j) out[j] = codeword[message_positions_[j]];
    return out;
}

Encoder build_encoder(const BinMatrix& h) { return Encoder(h); }

} // namespace rdmac
