#include "pphi/io.hpp"

#include <zlib.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <vector>

namespace pphi {

namespace {

constexpr char kMagic[4] = {'P', 'P', 'H', 'I'};
constexpr uint16_t kVersion = 1;

}  // namespace

bool compression_enabled() {
    const char* v = std::getenv("PPHI_COMPRESS");
    return v != nullptr && (std::strcmp(v, "1") == 0 || std::strcmp(v, "true") == 0);
}

void write_field(const RealField& f, const std::string& path) {
    std::vector<char> buf;
    buf.reserve(18 + f.values.size() * 8);
    buf.insert(buf.end(), kMagic, kMagic + 4);
    auto push = [&buf](const void* p, size_t bytes) {
        const char* c = static_cast<const char*>(p);
        buf.insert(buf.end(), c, c + bytes);
    };
    const uint16_t ver = kVersion;
    const uint32_t n = static_cast<uint32_t>(f.geom.n);
    push(&ver, 2);
    push(&n, 4);
    push(&f.geom.mass2, 8);
    push(f.values.data(), f.values.size() * 8);

    if (compression_enabled()) {
        gzFile gz = gzopen(path.c_str(), "wb");
        if (!gz) throw std::runtime_error("write_field: cannot open " + path);
        if (gzwrite(gz, buf.data(), static_cast<unsigned>(buf.size())) !=
            static_cast<int>(buf.size())) {
            gzclose(gz);
            throw std::runtime_error("write_field: short write to " + path);
        }
        gzclose(gz);
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("write_field: cannot open " + path);
        out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
        if (!out) throw std::runtime_error("write_field: short write to " + path);
    }
}

RealField read_field(const std::string& path) {
    gzFile gz = gzopen(path.c_str(), "rb");  // reads plain files too
    if (!gz) throw std::runtime_error("read_field: cannot open " + path);
    auto read_exact = [gz, &path](void* p, unsigned bytes) {
        if (gzread(gz, p, bytes) != static_cast<int>(bytes)) {
            gzclose(gz);
            throw std::runtime_error("read_field: truncated file " + path);
        }
    };
    char magic[4];
    read_exact(magic, 4);
    if (std::memcmp(magic, kMagic, 4) != 0) {
        gzclose(gz);
        throw std::runtime_error("read_field: bad magic in " + path);
    }
    uint16_t ver = 0;
    uint32_t n = 0;
    double mass2 = 0.0;
    read_exact(&ver, 2);
    if (ver != kVersion) {
        gzclose(gz);
        throw std::runtime_error("read_field: unsupported format version in " + path);
    }
    read_exact(&n, 4);
    read_exact(&mass2, 8);
    RealField f(LatticeGeometry(static_cast<int>(n), mass2));
    read_exact(f.values.data(), static_cast<unsigned>(f.values.size() * 8));
    gzclose(gz);
    return f;
}

JsonlWriter::JsonlWriter(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "w");
    if (!fp) throw std::runtime_error("JsonlWriter: cannot open " + path);
    file_ = fp;
}

JsonlWriter::~JsonlWriter() {
    if (file_) std::fclose(static_cast<FILE*>(file_));
}

void JsonlWriter::write(const nlohmann::json& record) {
    const std::string line = record.dump();
    std::fputs(line.c_str(), static_cast<FILE*>(file_));
    std::fputc('\n', static_cast<FILE*>(file_));
    std::fflush(static_cast<FILE*>(file_));
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_json_file: cannot open " + path);
    out << j.dump(2) << "\n";
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("read_json_file: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

}  // namespace pphi
