#include "rdmac/alist.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rdmac/errors.hpp"

namespace rdmac {

namespace {

class LineReader {
public:
    explicit LineReader(std::string_view text) : text_(text) {}

    // Next nonempty line as integer tokens.
    std::vector<long> next_ints(const char* what) {
        while (pos_ < text_.size()) {
            ++line_no_;
            std::size_t end = text_.find('\n', pos_);
            if (end == std::string_view::npos) end = text_.size();
            std::string line(text_.substr(pos_, end - pos_));
            pos_ = end + 1;
            std::istringstream iss(line);
            std::vector<long> vals;
            long v;
            while (iss >> v) vals.push_back(v);
            if (!iss.eof()) {
                iss.clear();
                std::string leftover;
                iss >> leftover;
                throw parse_error(line_no_, std::string("expected integers for ") + what +
                                                ", got '" + leftover + "'");
            }
            if (!vals.empty()) return vals;
        }
        throw parse_error(line_no_ + 1, std::string("unexpected end of input, expected ") + what);
    }

    int line_no() const { return line_no_; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
    int line_no_ = 0;
};

} // namespace

BinMatrix parse_alist(std::string_view text) {
    LineReader in(text);

    auto header = in.next_ints("header 'n_cols n_rows'");
    if (header.size() != 2 || header[0] <= 0 || header[1] < 0) {
        throw parse_error(in.line_no(), "header must be 'n_cols n_rows' with n_cols > 0");
    }
    const int n_cols = static_cast<int>(header[0]);
    const int n_rows = static_cast<int>(header[1]);

    auto maxdeg = in.next_ints("max degrees");
    if (maxdeg.size() != 2 || maxdeg[0] < 0 || maxdeg[1] < 0) {
        throw parse_error(in.line_no(), "expected 'max_col_degree max_row_degree'");
    }

    auto col_deg = in.next_ints("column degree list");
    if (static_cast<int>(col_deg.size()) != n_cols) {
        throw parse_error(in.line_no(), "column degree list must have " + std::to_string(n_cols) +
                                            " entries, got " + std::to_string(col_deg.size()));
    }
    // A zero-row matrix has no row degree line and no adjacency entries.
    std::vector<long> row_deg;
    if (n_rows > 0) {
        row_deg = in.next_ints("row degree list");
        if (static_cast<int>(row_deg.size()) != n_rows) {
            throw parse_error(in.line_no(), "row degree list must have " + std::to_string(n_rows) +
                                                " entries, got " + std::to_string(row_deg.size()));
        }
    }

    std::vector<std::vector<int>> col_adj(n_cols);
    for (int c = 0; c < n_cols && maxdeg[0] > 0; ++c) {
        auto vals = in.next_ints("column adjacency");
        for (long v : vals) {
            if (v == 0) continue; // padding
            if (v < 1 || v > n_rows) {
                throw parse_error(in.line_no(), "row index " + std::to_string(v) +
                                                    " out of range [1, " + std::to_string(n_rows) +
                                                    "]");
            }
            col_adj[c].push_back(static_cast<int>(v - 1));
        }
        if (static_cast<long>(col_adj[c].size()) != col_deg[c]) {
            throw parse_error(in.line_no(),
                              "column " + std::to_string(c + 1) + " lists " +
                                  std::to_string(col_adj[c].size()) + " entries, degree says " +
                                  std::to_string(col_deg[c]));
        }
    }
    if (maxdeg[0] == 0) {
        for (int c = 0; c < n_cols; ++c) {
            if (col_deg[c] != 0) {
                throw parse_error(in.line_no(), "column " + std::to_string(c + 1) +
                                                    " has nonzero degree but max degree is 0");
            }
        }
    }

    std::vector<std::vector<int>> rows(n_rows);
    for (int r = 0; r < n_rows && maxdeg[1] > 0; ++r) {
        auto vals = in.next_ints("row adjacency");
        for (long v : vals) {
            if (v == 0) continue;
            if (v < 1 || v > n_cols) {
                throw parse_error(in.line_no(), "column index " + std::to_string(v) +
                                                    " out of range [1, " + std::to_string(n_cols) +
                                                    "]");
            }
            rows[r].push_back(static_cast<int>(v - 1));
        }
        if (static_cast<long>(rows[r].size()) != row_deg[r]) {
            throw parse_error(in.line_no(), "row " + std::to_string(r + 1) + " lists " +
                                                std::to_string(rows[r].size()) +
                                                " entries, degree says " +
                                                std::to_string(row_deg[r]));
        }
    }
    if (maxdeg[1] == 0) {
        for (int r = 0; r < n_rows; ++r) {
            if (row_deg[r] != 0) {
                throw parse_error(in.line_no(), "row " + std::to_string(r + 1) +
                                                    " has nonzero degree but max degree is 0");
            }
        }
    }

    BinMatrix m(n_rows, n_cols, std::move(rows));
    // Cross-check the two adjacency blocks describe the same matrix.
    for (int c = 0; c < n_cols; ++c) {
        auto sorted = col_adj[c];
        std::sort(sorted.begin(), sorted.end());
        if (sorted != m.cols()[c]) {
            throw parse_error(in.line_no(), "column and row adjacency blocks disagree at column " +
                                                std::to_string(c + 1));
        }
    }
    return m;
}

std::string emit_alist(const BinMatrix& m) {
    std::size_t max_col = 0, max_row = 0;
    for (const auto& c : m.cols()) max_col = std::max(max_col, c.size());
    for (const auto& r : m.rows()) max_row = std::max(max_row, r.size());

    std::ostringstream out;
    out << m.n_cols() << ' ' << m.n_rows() << '\n';
    out << max_col << ' ' << max_row << '\n';
    for (int c = 0; c < m.n_cols(); ++c) out << m.cols()[c].size() << (c + 1 < m.n_cols() ? ' ' : '\n');
    for (int r = 0; r < m.n_rows(); ++r) out << m.rows()[r].size() << (r + 1 < m.n_rows() ? ' ' : '\n');
    // Zero-width blocks are omitted entirely; the parser skips them likewise.
    auto emit_block = [&](const std::vector<std::vector<int>>& adj, std::size_t width) {
        if (width == 0) return;
        for (const auto& entries : adj) {
            for (std::size_t i = 0; i < width; ++i) {
                if (i) out << ' ';
                out << (i < entries.size() ? entries[i] + 1 : 0);
            }
            out << '\n';
        }
    };
    emit_block(m.cols(), max_col);
    emit_block(m.rows(), max_row);
    return out.str();
}

BinMatrix read_alist(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open alist file: " + file.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_alist(ss.str());
    } catch (const parse_error& e) {
        throw parse_error(e.line(), file.string() + ": " + e.what());
    }
}

void write_alist(const std::filesystem::path& file, const BinMatrix& m) {
    std::ofstream out(file);
    if (!out) throw config_error("cannot open for write: " + file.string());
    out << emit_alist(m);
    if (!out) throw config_error("write failed: " + file.string());
}

} // namespace rdmac
