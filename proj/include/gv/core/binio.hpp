#pragma once

#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "gv/core/error.hpp"

// Little-endian binary i/o helpers shared by the GVFM/GVES/GVNN/GVET formats.

namespace gv::binio {

inline void write_bytes(std::ostream& os, const void* p, size_t n) {
    os.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
    if (!os) throw FormatError("binio: write failed");
}

inline void read_bytes(std::istream& is, void* p, size_t n) {
    is.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
    if (static_cast<size_t>(is.gcount()) != n)
        throw FormatError("binio: unexpected end of file");
}

template <typename T>
void write_le(std::ostream& os, T v) {
    static_assert(std::is_integral_v<T>);
    unsigned char buf[sizeof(T)];
    using U = std::make_unsigned_t<T>;
    U u = static_cast<U>(v);
    for (size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(u >> (8 * i));
    write_bytes(os, buf, sizeof(T));
}

template <typename T>
T read_le(std::istream& is) {
    static_assert(std::is_integral_v<T>);
    unsigned char buf[sizeof(T)];
    read_bytes(is, buf, sizeof(T));
    using U = std::make_unsigned_t<T>;
    U u = 0;
    for (size_t i = 0; i < sizeof(T); ++i) u |= static_cast<U>(buf[i]) << (8 * i);
    return static_cast<T>(u);
}

inline void write_f64(std::ostream& os, double v) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    write_le<uint64_t>(os, bits);
}

inline double read_f64(std::istream& is) {
    uint64_t bits = read_le<uint64_t>(is);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

inline void write_f32(std::ostream& os, float v) {
    uint32_t bits;
    std::memcpy(&bits, &v, 4);
    write_le<uint32_t>(os, bits);
}

inline float read_f32(std::istream& is) {
    uint32_t bits = read_le<uint32_t>(is);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

inline void write_f64_array(std::ostream& os, const double* p, size_t n) {
    for (size_t i = 0; i < n; ++i) write_f64(os, p[i]);
}

inline void read_f64_array(std::istream& is, double* p, size_t n) {
    for (size_t i = 0; i < n; ++i) p[i] = read_f64(is);
}

inline void write_magic(std::ostream& os, const char magic[4]) {
    write_bytes(os, magic, 4);
}

inline void expect_magic(std::istream& is, const char magic[4], const char* what) {
    char buf[4];
    read_bytes(is, buf, 4);
    if (std::memcmp(buf, magic, 4) != 0)
        throw FormatError(std::string(what) + ": bad magic");
}

inline void write_string(std::ostream& os, const std::string& s, size_t len_bytes = 4) {
    if (len_bytes == 2) {
        if (s.size() > 0xffff) throw FormatError("binio: string too long for u16 prefix");
        write_le<uint16_t>(os, static_cast<uint16_t>(s.size()));
    } else {
        write_le<uint32_t>(os, static_cast<uint32_t>(s.size()));
    }
    write_bytes(os, s.data(), s.size());
}

inline std::string read_string(std::istream& is, size_t len_bytes = 4) {
    size_t n = len_bytes == 2 ? read_le<uint16_t>(is) : read_le<uint32_t>(is);
    std::string s(n, '\0');
    if (n) read_bytes(is, s.data(), n);
    return s;
}

}  // namespace gv::binio
