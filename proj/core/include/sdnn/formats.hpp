#pragma once

// On-disk formats: tab-separated triples, the checksummed binary container,
// and category (truth) lists.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sdnn/sparse_matrix.hpp"

namespace sdnn {

/// Triples parsed from text, with the largest indices seen.
struct TripleList {
  std::vector<Triple> triples;
  std::uint64_t max_row = 0;
  std::uint64_t max_col = 0;
};

/// Parses "row<TAB>col<TAB>value" lines (1-based). Blank lines are skipped;
/// anything else malformed throws ParseError with its line number.
TripleList parse_tsv(std::string_view text);

/// One line per stored entry in row-major, column-ascending order. Values use
/// the shortest decimal that reads back to the same double, so integral
/// values carry no decimal point.
void write_tsv(const SparseMatrix& m, std::ostream& out);
std::string to_tsv(const SparseMatrix& m);

/// Order-insensitive; throws ParseError, or Error(bounds) for an index
/// outside n_rows x n_cols.
SparseMatrix read_tsv(std::istream& in, std::size_t n_rows, std::size_t n_cols);

/// Binary container layout, all integers little-endian:
///
///   magic "SDNNCSR\0" | u32 version | u32 reserved | u64 n_rows | u64 n_cols
///   | u64 nnz | u64 row_offsets[n_rows+1] | u32 col_indices[nnz]
///   | f64 values[nnz] | u64 checksum
///
/// The checksum is XXH3-64 of every byte between the magic and the checksum
/// itself.
inline constexpr char kBinaryMagic[8] = {'S', 'D', 'N', 'N', 'C', 'S', 'R', '\0'};
inline constexpr std::uint32_t kBinaryVersion = 1;

void write_binary(const SparseMatrix& m, std::ostream& out);
std::string to_binary(const SparseMatrix& m);

/// Throws Error(format) for a foreign magic, Error(version) for an unknown
/// version, Error(length) when truncated, Error(corruption) on a checksum or
/// structure mismatch.
SparseMatrix read_binary(std::istream& in);
SparseMatrix from_binary(std::string_view bytes);

/// One ascending 1-based index per line.
void write_truth(const CategorySet& categories, std::ostream& out);
/// Throws ParseError for a non-integer line and Error(duplicate) or
/// Error(format) for a repeated or descending index.
CategorySet read_truth(std::istream& in);

enum class MatrixFormat { tsv, binary };

/// ".bin" selects the binary container; anything else is TSV.
MatrixFormat format_for_path(const std::filesystem::path& path);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

/// Loads a matrix in the format implied by its extension. For TSV, a missing
/// dimension is taken from the largest index present. For binary, a given
/// dimension that disagrees with the stored one throws Error(shape).
SparseMatrix load_matrix(const std::filesystem::path& path,
                         std::optional<std::size_t> n_rows = std::nullopt,
                         std::optional<std::size_t> n_cols = std::nullopt);
void save_matrix(const SparseMatrix& m, const std::filesystem::path& path);

CategorySet load_truth(const std::filesystem::path& path);
void save_truth(const CategorySet& categories, const std::filesystem::path& path);

}  // namespace sdnn
