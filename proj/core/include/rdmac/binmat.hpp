#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace rdmac {

// GF(2) vector stored as a sorted support list.
struct BinVector {
    int length = 0;
    std::vector<int> support; // strictly increasing indices of the 1 bits

    BinVector() = default;
    BinVector(int length, std::vector<int> support_in);

    static BinVector zeros(int length) { return BinVector(length, {}); }
    static BinVector from_dense(std::span<const std::uint8_t> bits);
    std::vector<std::uint8_t> to_dense() const;

    bool get(int i) const;
    int weight() const { return static_cast<int>(support.size()); }
    bool all_zero() const { return support.empty(); }

    bool operator==(const BinVector&) const = default;
};

// XOR; operands must share a length.
BinVector operator^(const BinVector& a, const BinVector& b);

// Sparse GF(2) matrix, row-major support lists with a cached column adjacency.
// Rows are canonicalized to sorted unique indices at construction.
class BinMatrix {
public:
    BinMatrix() = default;
    BinMatrix(int n_rows, int n_cols, std::vector<std::vector<int>> rows);

    int n_rows() const { return n_rows_; }
    int n_cols() const { return n_cols_; }
    long n_edges() const { return n_edges_; }

    const std::vector<int>& row(int i) const { return rows_[i]; }
    const std::vector<std::vector<int>>& rows() const { return rows_; }
    const std::vector<std::vector<int>>& cols() const { return cols_; }

    BinMatrix take_rows(std::span<const int> idx) const;
    static BinMatrix vstack(const BinMatrix& top, const BinMatrix& bottom);

    bool operator==(const BinMatrix& other) const {
        return n_rows_ == other.n_rows_ && n_cols_ == other.n_cols_ && rows_ == other.rows_;
    }

private:
    int n_rows_ = 0;
    int n_cols_ = 0;
    long n_edges_ = 0;
    std::vector<std::vector<int>> rows_;
    std::vector<std::vector<int>> cols_;
};

// c * H^T over GF(2); c.length must equal H.n_cols().
BinVector syndrome(const BinVector& c, const BinMatrix& h);

// Dense fast path used in decoding loops: true iff every parity check is met.
bool syndrome_ok(std::span<const std::uint8_t> c, const BinMatrix& h);

int rank_gf2(const BinMatrix& h);

// True iff some pair of rows shares two or more columns.
bool has_four_cycle(const BinMatrix& h);

// Systematic encoder for an arbitrary (possibly rank-deficient) parity-check
// matrix. message_length() == n_cols - rank_gf2(h); generator rows are given
// in the original column order, so generator_rows() * h^T == 0 directly.
class Encoder {
public:
    explicit Encoder(const BinMatrix& h);

    int block_length() const { return n_; }
    int message_length() const { return k_; }

    // Row i is the codeword carrying message bit i (message bits enter
    // systematically at message_positions()).
    const BinMatrix& generator_rows() const { return generator_; }
    const std::vector<int>& message_positions() const { return message_positions_; }

    // Column permutation applied during elimination, recorded for reference;
    // generator rows and codewords are already expressed in source order.
    const std::vector<int>& column_permutation() const { return column_permutation_; }

    BinVector encode(std::span<const std::uint8_t> message) const;
    std::vector<std::uint8_t> encode_dense(std::span<const std::uint8_t> message) const;
    std::vector<std::uint8_t> extract_message(std::span<const std::uint8_t> codeword) const;

private:
    int n_ = 0;
    int k_ = 0;
    BinMatrix generator_;
    std::vector<int> message_positions_;
    std::vector<int> column_permutation_;
    std::vector<std::vector<std::uint64_t>> gen_words_; // dense rows for encoding
};

Encoder build_encoder(const BinMatrix& h);

} // namespace rdmac
