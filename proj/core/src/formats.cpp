#include "sdnn/formats.hpp"

#define XXH_INLINE_ALL
#include <xxhash.h>

#include <algorithm>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "sdnn/errors.hpp"

namespace sdnn {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r'; }

std::string_view next_field(std::string_view& line) {
  std::size_t i = 0;
  while (i < line.size() && is_blank(line[i])) ++i;
  std::size_t j = i;
  while (j < line.size() && !is_blank(line[j])) ++j;
  auto field = line.substr(i, j - i);
  line.remove_prefix(j);
  return field;
}

template <class T>
bool parse_number(std::string_view field, T& out) {
  if (field.empty()) return false;
  const char* first = field.data();
  if constexpr (std::is_floating_point_v<T>) {
    if (*first == '+') ++first;  // from_chars rejects a leading plus
  }
  auto [ptr, ec] = std::from_chars(first, field.data() + field.size(), out);
  return ec == std::errc() && ptr == field.data() + field.size();
}

void append_number(std::string& out, auto value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, ptr);
}

// --- little-endian primitives -------------------------------------------------

template <class T>
void put_le(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.append(bytes, sizeof(T));
}

template <class T>
T get_le(const char* p) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

template <class T>
void put_array_le(std::string& out, std::span<const T> values) {
  if constexpr (std::endian::native == std::endian::little) {
    out.append(reinterpret_cast<const char*>(values.data()), values.size_bytes());
  } else {
    for (const auto& v : values) put_le(out, v);
  }
}

template <class T>
std::vector<T> get_array_le(const char* p, std::size_t n) {
  std::vector<T> out(n);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(out.data(), p, n * sizeof(T));
  } else {
    for (std::size_t i = 0; i < n; ++i) out[i] = get_le<T>(p + i * sizeof(T));
  }
  return out;
}

std::uint64_t payload_checksum(std::string_view bytes) {
  return XXH3_64bits(bytes.data(), bytes.size());
}

constexpr std::size_t kMagicSize = sizeof(kBinaryMagic);
constexpr std::size_t kHeaderSize = kMagicSize + 4 + 4 + 8 + 8 + 8;
constexpr std::size_t kTrailerSize = 8;

std::string slurp(std::istream& in) {
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TripleList parse_tsv(std::string_view text) {
  TripleList out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text.remove_prefix(eol == std::string_view::npos ? text.size() : eol + 1);

    if (std::all_of(line.begin(), line.end(), is_blank)) continue;

    Triple t;
    const auto row = next_field(line);
    const auto col = next_field(line);
    const auto val = next_field(line);
    if (val.empty()) throw ParseError(line_no, "expected 3 fields: row, col, value");
    if (!next_field(line).empty()) throw ParseError(line_no, "more than 3 fields");
    if (!parse_number(row, t.row)) throw ParseError(line_no, "bad row index '" + std::string(row) + "'");
    if (!parse_number(col, t.col)) throw ParseError(line_no, "bad column index '" + std::string(col) + "'");
    if (!parse_number(val, t.value)) throw ParseError(line_no, "bad value '" + std::string(val) + "'");
    if (t.row == 0 || t.col == 0) throw ParseError(line_no, "indices are 1-based");

    out.max_row = std::max(out.max_row, t.row);
    out.max_col = std::max(out.max_col, t.col);
    out.triples.push_back(t);
  }
  return out;
}

std::string to_tsv(const SparseMatrix& m) {
  std::string out;
  out.reserve(m.nnz() * 16);
  for (std::size_t r = 0; r < m.n_rows(); ++r) {
    auto cols = m.row_cols(r);
    auto vals = m.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      append_number(out, r + 1);
      out.push_back('\t');
      append_number(out, std::size_t{cols[k]} + 1);
      out.push_back('\t');
      append_number(out, vals[k]);
      out.push_back('\n');
    }
  }
  return out;
}

void write_tsv(const SparseMatrix& m, std::ostream& out) {
  const auto text = to_tsv(m);
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::io, "failed writing TSV stream");
}

SparseMatrix read_tsv(std::istream& in, std::size_t n_rows, std::size_t n_cols) {
  const auto text = slurp(in);
  const auto list = parse_tsv(text);
  return build_from_triples(list.triples, n_rows, n_cols);
}

std::string to_binary(const SparseMatrix& m) {
  std::string out;
  out.reserve(kHeaderSize + m.row_offsets().size_bytes() + m.col_indices().size_bytes() +
              m.values().size_bytes() + kTrailerSize);
  out.append(kBinaryMagic, kMagicSize);
  put_le<std::uint32_t>(out, kBinaryVersion);
  put_le<std::uint32_t>(out, 0);
  put_le<std::uint64_t>(out, m.n_rows());
  put_le<std::uint64_t>(out, m.n_cols());
  put_le<std::uint64_t>(out, m.nnz());
  put_array_le(out, m.row_offsets());
  put_array_le(out, m.col_indices());
  put_array_le(out, m.values());
  put_le<std::uint64_t>(out, payload_checksum(std::string_view(out).substr(kMagicSize)));
  return out;
}

void write_binary(const SparseMatrix& m, std::ostream& out) {
  const auto bytes = to_binary(m);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorKind::io, "failed writing binary stream");
}

SparseMatrix from_binary(std::string_view bytes) {
  if (bytes.size() < kMagicSize || std::memcmp(bytes.data(), kBinaryMagic, kMagicSize) != 0) {
    fail(ErrorKind::format, "not a binary sparse container (bad magic)");
  }
  if (bytes.size() < kHeaderSize + kTrailerSize) fail(ErrorKind::length, "binary header truncated");

  const char* p = bytes.data() + kMagicSize;
  const auto version = get_le<std::uint32_t>(p);
  if (version != kBinaryVersion) {
    fail(ErrorKind::version, "binary container version " + std::to_string(version) +
                                 " is not supported (expected " +
                                 std::to_string(kBinaryVersion) + ")");
  }
  const auto n_rows = get_le<std::uint64_t>(p + 8);
  const auto n_cols = get_le<std::uint64_t>(p + 16);
  const auto nnz = get_le<std::uint64_t>(p + 24);

  // Reject counts that cannot possibly fit before doing any size arithmetic.
  const std::uint64_t body = bytes.size() - kHeaderSize - kTrailerSize;
  if (n_rows >= body / 8 || nnz > body / 12) {
    fail(ErrorKind::length, "binary payload truncated or counts corrupt");
  }
  const std::uint64_t expected = (n_rows + 1) * 8 + nnz * 4 + nnz * 8;
  if (body < expected) fail(ErrorKind::length, "binary payload truncated");
  if (body > expected) fail(ErrorKind::corruption, "binary payload has trailing bytes");

  const auto stored = get_le<std::uint64_t>(bytes.data() + bytes.size() - kTrailerSize);
  const auto actual =
      payload_checksum(bytes.substr(kMagicSize, bytes.size() - kMagicSize - kTrailerSize));
  if (stored != actual) fail(ErrorKind::corruption, "binary checksum mismatch");

  const char* arrays = bytes.data() + kHeaderSize;
  CsrParts parts;
  parts.n_rows = n_rows;
  parts.n_cols = n_cols;
  parts.row_offsets = get_array_le<Offset>(arrays, n_rows + 1);
  parts.col_indices = get_array_le<ColIndex>(arrays + (n_rows + 1) * 8, nnz);
  parts.values = get_array_le<double>(arrays + (n_rows + 1) * 8 + nnz * 4, nnz);
  if (auto v = validate(parts); !v) fail(ErrorKind::corruption, "binary container: " + v.violation);
  return SparseMatrix::adopt_trusted(std::move(parts));
}

SparseMatrix read_binary(std::istream& in) { return from_binary(slurp(in)); }

void write_truth(const CategorySet& categories, std::ostream& out) {
  std::string text;
  for (auto r : categories.rows()) {
    append_number(text, r);
    text.push_back('\n');
  }
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) fail(ErrorKind::io, "failed writing category stream");
}

CategorySet read_truth(std::istream& in) {
  const auto text = slurp(in);
  std::string_view rest(text);
  std::vector<std::uint64_t> rows;
  std::size_t line_no = 0;
  while (!rest.empty()) {
    ++line_no;
    const auto eol = rest.find('\n');
    std::string_view line = rest.substr(0, eol);
    rest.remove_prefix(eol == std::string_view::npos ? rest.size() : eol + 1);
    if (std::all_of(line.begin(), line.end(), is_blank)) continue;

    const auto field = next_field(line);
    if (!next_field(line).empty()) throw ParseError(line_no, "expected one index per line");
    std::uint64_t row = 0;
    if (!parse_number(field, row) || row == 0) {
      throw ParseError(line_no, "bad category index '" + std::string(field) + "'");
    }
    if (!rows.empty() && row == rows.back()) {
      fail(ErrorKind::duplicate, "line " + std::to_string(line_no) + ": duplicate category " +
                                     std::to_string(row));
    }
    if (!rows.empty() && row < rows.back()) {
      throw ParseError(line_no, "categories must be ascending");
    }
    rows.push_back(row);
  }
  return CategorySet(std::move(rows));
}

MatrixFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? MatrixFormat::binary : MatrixFormat::tsv;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::string data;
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size > 0) {
    data.resize(static_cast<std::size_t>(size));
    in.seekg(0);
    in.read(data.data(), size);
  }
  if (!in) fail(ErrorKind::io, "failed reading " + path.string());
  return data;
}

void write_file(const std::filesystem::path& path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io, "cannot create " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  if (!out) fail(ErrorKind::io, "failed writing " + path.string());
}

SparseMatrix load_matrix(const std::filesystem::path& path, std::optional<std::size_t> n_rows,
                         std::optional<std::size_t> n_cols) {
  const auto bytes = read_file(path);
  try {
    if (format_for_path(path) == MatrixFormat::binary) {
      auto m = from_binary(bytes);
      if ((n_rows && *n_rows != m.n_rows()) || (n_cols && *n_cols != m.n_cols())) {
        fail(ErrorKind::shape, "stored shape " + std::to_string(m.n_rows()) + "x" +
                                   std::to_string(m.n_cols()) + " differs from the expected shape");
      }
      return m;
    }
    auto list = parse_tsv(bytes);
    return build_from_triples(list.triples, n_rows.value_or(list.max_row),
                              n_cols.value_or(list.max_col));
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void save_matrix(const SparseMatrix& m, const std::filesystem::path& path) {
  write_file(path, format_for_path(path) == MatrixFormat::binary ? to_binary(m) : to_tsv(m));
}

CategorySet load_truth(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  try {
    return read_truth(in);
  } catch (const Error& e) {
    fail(e.kind(), path.string() + ": " + e.what());
  }
}

void save_truth(const CategorySet& categories, const std::filesystem::path& path) {
  std::ostringstream out;
  write_truth(categories, out);
  write_file(path, out.str());
}

}  // namespace sdnn
