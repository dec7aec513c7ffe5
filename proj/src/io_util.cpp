#include "rws/io_util.hpp"

#include <charconv>
#include <cstring>
#include <fstream>

#include "rws/errors.hpp"

namespace rws {

void write_u32(std::ostream& os, std::uint32_t v) {
    char buf[4];
    for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, 4);
}

void write_u64(std::ostream& os, std::uint64_t v) {
    char buf[8];
    for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
    os.write(buf, 8);
}

std::uint32_t read_u32(std::istream& is) {
    unsigned char buf[4];
    is.read(reinterpret_cast<char*>(buf), 4);
    if (!is) throw IoError("unexpected end of file while reading u32");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(buf[i]) << (8 * i);
    return v;
}

std::uint64_t read_u64(std::istream& is) {
    unsigned char buf[8];
    is.read(reinterpret_cast<char*>(buf), 8);
    if (!is) throw IoError("unexpected end of file while reading u64");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
    return v;
}

void write_bytes(std::ostream& os, std::string_view s) {
    os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::string read_bytes(std::istream& is, std::size_t n) {
    std::string s(n, '\0');
    is.read(s.data(), static_cast<std::streamsize>(n));
    if (!is) throw IoError("unexpected end of file while reading " + std::to_string(n) + " bytes");
    return s;
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path.string());
    std::string out;
    in.seekg(0, std::ios::end);
    auto n = in.tellg();
    in.seekg(0, std::ios::beg);
    if (n > 0) {
        out.resize(static_cast<std::size_t>(n));
        in.read(out.data(), n);
    }
    if (in.bad()) throw IoError("read failed: " + path.string());
    return out;
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + path.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw IoError("write failed: " + path.string());
}

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t fnv1a64_file(const std::filesystem::path& path) {
    return fnv1a64(read_file(path));
}

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[v & 0xF];
        v >>= 4;
    }
    return s;
}

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace rws
