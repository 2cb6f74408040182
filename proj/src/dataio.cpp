// wdc: wireless channel dataset synthesis with meta-trained conditional GANs
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "wdc/dataio.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "wdc/error.hpp"

namespace wdc {

namespace {

void append_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void append_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    append_u64(out, bits);
}

// Cursor over an in-memory file image. Reads throw CorruptionError on
// truncation; the caller supplies context in `what`.
class Reader {
  public:
    Reader(const std::string& bytes, const std::string& path) : bytes_(bytes), path_(path) {}

    void read_bytes(char* dst, std::size_t n, const char* what) {
        if (pos_ + n > bytes_.size())
            throw CorruptionError(path_ + ": truncated while reading " + std::string(what));
        std::memcpy(dst, bytes_.data() + pos_, n);
        pos_ += n;
    }

    std::uint16_t read_u16(const char* what) {
        unsigned char b[2];
        read_bytes(reinterpret_cast<char*>(b), 2, what);
        return static_cast<std::uint16_t>(b[0] | (b[1] << 8));
    }

    std::uint32_t read_u32(const char* what) {
        unsigned char b[4];
        read_bytes(reinterpret_cast<char*>(b), 4, what);
        std::uint32_t v = 0;
        for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    std::uint64_t read_u64(const char* what) {
        unsigned char b[8];
        read_bytes(reinterpret_cast<char*>(b), 8, what);
        std::uint64_t v = 0;
        for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
        return v;
    }

    double read_f64(const char* what) {
        std::uint64_t bits = read_u64(what);
        double v;
        std::memcpy(&v, &bits, sizeof v);
        return v;
    }

    std::size_t remaining() const { return bytes_.size() - pos_; }

  private:
    const std::string& bytes_;
    std::string path_;
    std::size_t pos_ = 0;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw IoError("read failed for " + path);
    return std::move(buf).str();
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& bytes) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw IoError("cannot create directory " + target.parent_path().string() + ": " + ec.message());
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open " + tmp.string() + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw IoError("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        std::error_code ec2;
        fs::remove(tmp, ec2);
        throw IoError("cannot rename " + tmp.string() + " to " + path + ": " + ec.message());
    }
}

void save_dataset(const WirelessDataset& ds, const std::string& path) {
    ds.validate();
    nlohmann::json meta(ds.meta);  // std::map source: keys serialize sorted

    std::string out;
    out.append(kDatasetMagic, 4);
    append_u16(out, kDatasetVersion);
    append_u32(out, static_cast<std::uint32_t>(ds.nt));
    append_u64(out, ds.samples.size());
    append_u32(out, static_cast<std::uint32_t>(ds.condition_index));
    append_f64(out, ds.scale);
    const std::string meta_text = meta.dump();
    append_u32(out, static_cast<std::uint32_t>(meta_text.size()));
    out += meta_text;
    for (const auto& s : ds.samples) {
        for (const auto& z : s) {
            append_f64(out, z.real());
            append_f64(out, z.imag());
        }
    }
    write_file_atomic(path, out);
}

WirelessDataset load_dataset(const std::string& path) {
    const std::string bytes = read_file(path);
    Reader r(bytes, path);

    char magic[4];
    r.read_bytes(magic, 4, "magic");
    if (std::memcmp(magic, kDatasetMagic, 4) != 0)
        throw FormatError(path + ": not a WDC1 dataset file (bad magic)");
    const std::uint16_t version = r.read_u16("version");
    if (version != kDatasetVersion)
        throw FormatError(path + ": unsupported dataset version " + std::to_string(version));

    WirelessDataset ds;
    ds.nt = static_cast<int>(r.read_u32("nt"));
    const std::uint64_t count = r.read_u64("sample count");
    ds.condition_index = static_cast<int>(r.read_u32("condition index"));
    ds.scale = r.read_f64("scale");
    const std::uint32_t meta_len = r.read_u32("metadata length");
    std::string meta_text(meta_len, '\0');
    r.read_bytes(meta_text.data(), meta_len, "metadata");
    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(meta_text);
    } catch (const nlohmann::json::exception& e) {
        throw CorruptionError(path + ": metadata is not valid JSON: " + e.what());
    }
    if (!meta.is_object()) throw CorruptionError(path + ": metadata is not a JSON object");
    for (const auto& [key, value] : meta.items()) {
        if (!value.is_string())
            throw CorruptionError(path + ": metadata value for \"" + key + "\" is not a string");
        ds.meta[key] = value.get<std::string>();
    }

    if (ds.nt < 1) throw CorruptionError(path + ": invalid antenna count " + std::to_string(ds.nt));
    const std::uint64_t body_doubles = count * 2ull * static_cast<std::uint64_t>(ds.nt);
    if (r.remaining() != body_doubles * 8ull)
        throw CorruptionError(path + ": body holds " + std::to_string(r.remaining()) +
                                                    " bytes, expected " + std::to_string(body_doubles * 8ull));

    ds.samples.resize(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        ComplexVec s(static_cast<std::size_t>(ds.nt));
        for (int a = 0; a < ds.nt; ++a) {
            const double re = r.read_f64("sample body");
            const double im = r.read_f64("sample body");
            s[static_cast<std::size_t>(a)] = {re, im};
        }
        ds.samples[i] = std::move(s);
    }
    ds.validate();
    return ds;
}

WirelessDataset import_csv(const std::string& path, int nt, int condition_index) {
    if (nt < 1) throw InvalidArgument("import_csv: nt must be >= 1");
    if (condition_index < 0) throw InvalidArgument("import_csv: condition_index must be >= 0");
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path + " for reading");

    WirelessDataset ds;
    ds.nt = nt;
    ds.condition_index = condition_index;
    ds.scale = 1.0;
    ds.meta["source"] = "imported";

    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::vector<double> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            const std::string cell = line.substr(start, comma == std::string::npos ? std::string::npos
                                                                                                                                                          : comma - start);
            errno = 0;
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            while (end && *end == ' ') ++end;
            if (cell.empty() || end == cell.c_str() || (end && *end != '\0') || errno == ERANGE)
                throw ParseError(path + ":" + std::to_string(lineno) + ": field " +
                                                  std::to_string(fields.size() + 1) + " is not a number: \"" + cell + "\"");
            if (!std::isfinite(v))
                throw ParseError(path + ":" + std::to_string(lineno) + ": field " +
                                                  std::to_string(fields.size() + 1) + " is not finite");
            fields.push_back(v);
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (fields.size() != 2 * static_cast<std::size_t>(nt))
            throw ParseError(path + ":" + std::to_string(lineno) + ": expected " +
                                              std::to_string(2 * nt) + " fields, found " + std::to_string(fields.size()));
        ds.samples.push_back(unflatten(fields));
    }
    if (in.bad()) throw IoError("read failed for " + path);
    if (ds.samples.empty()) throw InvalidArgument(path + ": no samples to import");
    return ds;
}

void export_csv(const WirelessDataset& ds, const std::string& path) {
    ds.validate();
    std::string out;
    char buf[64];
    for (const auto& s : ds.samples) {
        bool first = true;
        for (const auto& z : s) {
            for (double v : {z.real(), z.imag()}) {
                if (!first) out.push_back(',');
                first = false;
                std::snprintf(buf, sizeof buf, "%.17g", v);
                out += buf;
            }
        }
        out.push_back('\n');
    }
    write_file_atomic(path, out);
}

void save_checkpoint(std::uint64_t spec_digest, const ParamVector& params,
                                          const std::string& path) {
    std::string out;
    out.append(kCheckpointMagic, 4);
    append_u16(out, kCheckpointVersion);
    append_u64(out, spec_digest);
    append_u64(out, params.size());
    for (double v : params) append_f64(out, v);
    write_file_atomic(path, out);
}

std::pair<std::uint64_t, ParamVector> read_checkpoint(const std::string& path) {
    const std::string bytes = read_file(path);
    Reader r(bytes, path);

    char magic[4];
    r.read_bytes(magic, 4, "magic");
    if (std::memcmp(magic, kCheckpointMagic, 4) != 0)
        throw FormatError(path + ": not a WCK1 checkpoint file (bad magic)");
    const std::uint16_t version = r.read_u16("version");
    if (version != kCheckpointVersion)
        throw FormatError(path + ": unsupported checkpoint version " + std::to_string(version));

    const std::uint64_t digest = r.read_u64("spec digest");
    const std::uint64_t count = r.read_u64("parameter count");
    if (r.remaining() != count * 8ull)
        throw CorruptionError(path + ": body holds " + std::to_string(r.remaining()) +
                                                    " bytes, expected " + std::to_string(count * 8ull));
    ParamVector params(count);
    for (std::uint64_t i = 0; i < count; ++i) params[i] = r.read_f64("parameters");
    return {digest, std::move(params)};
}

ParamVector load_checkpoint(const std::string& path, std::uint64_t expected_digest) {
    auto [digest, params] = read_checkpoint(path);
    if (digest != expected_digest)
        throw CompatibilityError(path + ": checkpoint was written for spec digest " +
                                                          digest_hex(digest) + ", expected " + digest_hex(expected_digest));
    return params;
}

std::uint64_t fnv1a64(std::span<const unsigned char> bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::uint64_t fnv1a64(const std::string& s) {
    return fnv1a64(std::span<const unsigned char>(
            reinterpret_cast<const unsigned char*>(s.data()), s.size()));
}

std::uint64_t fnv1a64(std::span<const double> values) {
    // Hash the IEEE-754 bit patterns so the digest is exact, not rounded.
    std::string bytes;
    bytes.reserve(values.size() * 8);
    for (double v : values) append_f64(bytes, v);
    return fnv1a64(bytes);
}

std::string digest_hex(std::uint64_t digest) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(digest));
    return std::string(buf);
}

std::uint64_t file_digest(const std::string& path) { return fnv1a64(read_file(path)); }

}  // namespace wdc
