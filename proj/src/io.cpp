#include "tracenorm/io.hpp"

#include <cctype>
#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace tracenorm::io {

namespace {

[[noreturn]] void fail(const std::filesystem::path& file, long line, const std::string& what) {
  throw ParseError(file.string() + ":" + std::to_string(line) + ": " + what);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void write_matrix_market(const std::filesystem::path& file,
                         const problems::ObservedEntries& entries) {
  std::ofstream out(file);
  if (!out) throw ParameterError("cannot open for writing: " + file.string());
  out << "%%MatrixMarket matrix coordinate real general\n";
  out << entries.rows() << " " << entries.cols() << " " << entries.nnz() << "\n";
  const auto& ri = entries.row_indices();
  const auto& ci = entries.col_indices();
  const auto& vals = entries.values();
  for (Index k = 0; k < entries.nnz(); ++k)
    out << (ri[k] + 1) << " " << (ci[k] + 1) << " " << format_double(vals[k]) << "\n";
  if (!out) throw ParameterError("write failed: " + file.string());
}

problems::ObservedEntries read_matrix_market(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot open: " + file.string());
  std::string line;
  long line_no = 0;

  if (!std::getline(in, line)) fail(file, 1, "empty file");
  ++line_no;
  if (line.rfind("%%MatrixMarket", 0) != 0) fail(file, line_no, "missing MatrixMarket banner");
  {
    std::istringstream hdr(line);
    std::string banner, object, fmt, field, symmetry;
    hdr >> banner >> object >> fmt >> field >> symmetry;
    if (object != "matrix" || fmt != "coordinate" || field != "real" || symmetry != "general")
      fail(file, line_no, "unsupported MatrixMarket header: " + line);
  }
  // Skip comments.
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line[0] != '%') break;
  }
  Index rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream sz(line);
    if (!(sz >> rows >> cols >> nnz)) fail(file, line_no, "bad size line");
  }
  std::vector<problems::ObservedEntries::Triplet> triplets;
  triplets.reserve(static_cast<size_t>(nnz));
  for (Index k = 0; k < nnz; ++k) {
    if (!std::getline(in, line)) fail(file, line_no + 1, "unexpected end of file");
    ++line_no;
    std::istringstream row(line);
    Index i = 0, j = 0;
    double v = 0;
    if (!(row >> i >> j >> v)) fail(file, line_no, "bad entry line");
    if (i < 1 || i > rows || j < 1 || j > cols) fail(file, line_no, "index out of range");
    triplets.push_back({i - 1, j - 1, v});
  }
  try {
    return problems::ObservedEntries(rows, cols, std::move(triplets));
  } catch (const ParameterError& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
}

void write_dense_csv(const std::filesystem::path& file, const Matrix& m) {
  std::ofstream out(file);
  if (!out) throw ParameterError("cannot open for writing: " + file.string());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  if (!out) throw ParameterError("write failed: " + file.string());
  nlohmann::json shape;
  shape["rows"] = m.rows();
  shape["cols"] = m.cols();
  write_json(file.string() + ".json", shape);
}

Matrix read_dense_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot open: " + file.string());
  std::vector<std::vector<double>> rows;
  std::string line;
  long line_no = 0;
  Index cols = -1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    const char* ptr = line.data();
    const char* end = line.data() + line.size();
    while (ptr < end) {
      double v = 0;
      auto [next, ec] = std::from_chars(ptr, end, v);
      if (ec != std::errc()) fail(file, line_no, "bad number");
      row.push_back(v);
      ptr = next;
      if (ptr < end) {
        if (*ptr != ',') fail(file, line_no, "expected comma");
        ++ptr;
      }
    }
    if (cols < 0)
      cols = static_cast<Index>(row.size());
    else if (static_cast<Index>(row.size()) != cols)
      fail(file, line_no, "ragged row");
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), std::max<Index>(cols, 0));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];

  const std::filesystem::path sidecar = file.string() + ".json";
  if (std::filesystem::exists(sidecar)) {
    nlohmann::json shape = read_json(sidecar);
    if (shape.value("rows", m.rows()) != m.rows() || shape.value("cols", m.cols()) != m.cols())
      throw ParseError(file.string() + ": shape sidecar disagrees with data");
  }
  return m;
}

void write_json(const std::filesystem::path& file, const nlohmann::json& j) {
  std::ofstream out(file);
  if (!out) throw ParameterError("cannot open for writing: " + file.string());
  out << j.dump(2) << "\n";
}

nlohmann::json read_json(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParameterError("cannot open: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(file.string() + ": " + e.what());
  }
  return j;
}

TraceWriter::TraceWriter(const std::filesystem::path& file) : out_(file) {
  if (!out_) throw ParameterError("cannot open for writing: " + file.string());
}

void TraceWriter::event(nlohmann::json obj) {
  if (!out_.is_open()) return;
  obj["v"] = 1;
  out_ << obj.dump() << "\n";
}

}  // namespace tracenorm::io
