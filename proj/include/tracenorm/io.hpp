#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "tracenorm/problems.hpp"
#include "tracenorm/types.hpp"

namespace tracenorm::io {

struct ParseError : ParameterError {
  using ParameterError::ParameterError;
};

// Coordinate-format Matrix Market file (1-based indices, `real general`).
// Values are written with enough digits to round-trip bit-identically.
void write_matrix_market(const std::filesystem::path& file,
                         const problems::ObservedEntries& entries);
problems::ObservedEntries read_matrix_market(const std::filesystem::path& file);

// Headerless CSV plus a `<file>.json` sidecar carrying {"rows": r, "cols": c}.
void write_dense_csv(const std::filesystem::path& file, const Matrix& m);
Matrix read_dense_csv(const std::filesystem::path& file);

void write_json(const std::filesystem::path& file, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& file);

// JSON Lines trace writer; every event carries the schema version field "v".
class TraceWriter {
 public:
  TraceWriter() = default;
  explicit TraceWriter(const std::filesystem::path& file);
  void event(nlohmann::json obj);
  bool open() const { return out_.is_open(); }

 private:
  std::ofstream out_;
};

}  // namespace tracenorm::io
