#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace rws {

// Little-endian fixed-width encoding, independent of host byte order, so
// persisted files are bit-exact across platforms.
void write_u32(std::ostream& os, std::uint32_t v);
void write_u64(std::ostream& os, std::uint64_t v);
std::uint32_t read_u32(std::istream& is);
std::uint64_t read_u64(std::istream& is);

void write_bytes(std::ostream& os, std::string_view s);
std::string read_bytes(std::istream& is, std::size_t n);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view contents);

// FNV-1a, the digest used for store/config fingerprints in manifests.
std::uint64_t fnv1a64(std::string_view bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string to_hex(std::uint64_t v);

// Shortest round-trip decimal formatting (std::to_chars); used everywhere a
// score is printed so that reruns are byte-identical.
std::string format_double(double v);

}  // namespace rws
