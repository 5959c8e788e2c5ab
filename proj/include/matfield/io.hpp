// Field-file persistence and result provenance.
//
// File format: one JSON header line {kind, d, n, L, rep, seed?} terminated by
// '\n', followed by the payload as raw little-endian 64-bit float (re, im)
// pairs in flat point order with components fastest-varying.  The payload is
// written and read bitwise, so write-then-read reproduces a field exactly.
//
// Read failures carry distinct types: a header that does not parse or
// validate, a payload cut mid-value, and a structurally complete payload
// whose length contradicts the declared kind/dimension.

#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "matfield/core.hpp"

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; big-endian hosts are unsupported");

namespace matfield {

inline constexpr const char* library_version = "0.1.0";

struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};
struct io_malformed_header : io_error {
    explicit io_malformed_header(const std::string& what)
        : io_error("malformed header: " + what) {}
};
struct io_truncated_payload : io_error {
    explicit io_truncated_payload(const std::string& what)
        : io_error("truncated payload: " + what) {}
};
struct io_kind_mismatch : io_error {
    explicit io_kind_mismatch(const std::string& what) : io_error("kind mismatch: " + what) {}
};

// ---------------------------------------------------------------------------
// field files

inline void write_field(const Field& f, const std::string& path,
                        std::optional<std::uint64_t> seed = std::nullopt) {
    nlohmann::json header{{"kind", to_string(f.kind())},
                          {"d", f.grid().d},
                          {"n", f.grid().n},
                          {"L", f.grid().L},
                          {"rep", to_string(f.rep())}};
    if (seed) header["seed"] = *seed;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    const std::string line = header.dump();
    out.write(line.data(), static_cast<std::streamsize>(line.size()));
    out.put('\n');

    std::vector<char> buf(f.size() * 2 * sizeof(double));
    char* dst = buf.data();
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double re = f[i].real(), im = f[i].imag();
        std::memcpy(dst, &re, sizeof(double));
        std::memcpy(dst + sizeof(double), &im, sizeof(double));
        dst += 2 * sizeof(double);
    }
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw io_error("short write to '" + path + "'");
}

inline Field read_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open '" + path + "' for reading");

    std::string line;
    if (!std::getline(in, line) || line.empty())
        throw io_malformed_header("missing header line in '" + path + "'");

    nlohmann::json header;
    try {
        header = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
        throw io_malformed_header(std::string(e.what()) + " in '" + path + "'");
    }

    Field f;
    try {
        const FieldKind kind = field_kind_from_string(header.at("kind").get<std::string>());
        const Rep rep = rep_from_string(header.at("rep").get<std::string>());
        const Grid g = make_grid(header.at("d").get<int>(), header.at("n").get<int>(),
                                 header.at("L").get<double>());
        f = Field(g, kind, rep);
    } catch (const nlohmann::json::exception& e) {
        throw io_malformed_header(std::string(e.what()) + " in '" + path + "'");
    } catch (const config_error& e) {
        throw io_malformed_header(std::string(e.what()) + " in '" + path + "'");
    }

    const auto payload_start = in.tellg();
    in.seekg(0, std::ios::end);
    const auto payload_bytes = static_cast<std::size_t>(in.tellg() - payload_start);
    in.seekg(payload_start);

    constexpr std::size_t value_bytes = 2 * sizeof(double);
    const std::size_t expected = f.size() * value_bytes;
    if (payload_bytes % value_bytes != 0)
        throw io_truncated_payload("payload of '" + path + "' ends mid-value (" +
                                   std::to_string(payload_bytes) + " bytes)");
    if (payload_bytes != expected)
        throw io_kind_mismatch("payload of '" + path + "' holds " +
                               std::to_string(payload_bytes / value_bytes) +
                               " values but the header declares " + std::to_string(f.size()));

    std::vector<char> buf(expected);
    in.read(buf.data(), static_cast<std::streamsize>(expected));
    if (static_cast<std::size_t>(in.gcount()) != expected)
        throw io_truncated_payload("short read from '" + path + "'");
    const char* src = buf.data();
    for (std::size_t i = 0; i < f.size(); ++i) {
        double re, im;
        std::memcpy(&re, src, sizeof(double));
        std::memcpy(&im, src + sizeof(double), sizeof(double));
        f[i] = complexd(re, im);
        src += value_bytes;
    }
    return f;
}

inline Field read_field(const std::string& path, FieldKind expected_kind) {
    Field f = read_field(path);
    if (f.kind() != expected_kind)
        throw io_kind_mismatch("'" + path + "' holds a " + to_string(f.kind()) +
                               " field, expected " + to_string(expected_kind));
    return f;
}

// ---------------------------------------------------------------------------
// result provenance

// every JSON artifact starts from this skeleton
inline nlohmann::json artifact_skeleton(const nlohmann::json& config, double wall_time_seconds) {
    return nlohmann::json{
        {"config", config}, {"version", library_version}, {"wall_time", wall_time_seconds}};
}

inline void write_json(const nlohmann::json& j, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw io_error("short write to '" + path + "'");
}

}  // namespace matfield
