#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "rdmac/binmat.hpp"

namespace rdmac {

// Text format for sparse GF(2) matrices: header "n_cols n_rows", max column
// and row degrees, per-column and per-row degree lists, then 1-based index
// lists padded with zeros to the max degree. Errors carry line numbers.
BinMatrix parse_alist(std::string_view text);
std::string emit_alist(const BinMatrix& m);

BinMatrix read_alist(const std::filesystem::path& file);
void write_alist(const std::filesystem::path& file, const BinMatrix& m);

} // namespace rdmac
