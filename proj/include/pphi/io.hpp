#pragma once

#include <string>

#include "pphi/field.hpp"

#include "json.hpp"

namespace pphi {

/// Binary field file: magic "PPHI", u16 format version, u32 n, f64 mass2,
/// then n^2 little-endian f64 values row-major. When the environment
/// variable PPHI_COMPRESS is set to 1 the payload is gzip-compressed under
/// the same file name; the reader handles both transparently.
void write_field(const RealField& f, const std::string& path);
RealField read_field(const std::string& path);

bool compression_enabled();

/// Appends one JSON record per line.
class JsonlWriter {
  public:
    explicit JsonlWriter(const std::string& path);
    ~JsonlWriter();
    void write(const nlohmann::json& record);

  private:
    void* file_;  // FILE*
};

void write_json_file(const nlohmann::json& j, const std::string& path);
nlohmann::json read_json_file(const std::string& path);

}  // namespace pphi
