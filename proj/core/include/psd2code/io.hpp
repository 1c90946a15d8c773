#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psd2code {

class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

std::vector<std::uint8_t> read_file_bytes(const std::filesystem::path& path);
std::string read_file_text(const std::filesystem::path& path);
void write_file_bytes(const std::filesystem::path& path, const std::uint8_t* data, std::size_t size);
void write_file_text(const std::filesystem::path& path, std::string_view text);

// Lowercase hex SHA-256 of a byte buffer.
std::string sha256_hex(const std::uint8_t* data, std::size_t size);
std::string sha256_hex(std::string_view s);

}  // namespace psd2code
