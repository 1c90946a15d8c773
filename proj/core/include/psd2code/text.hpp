#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace psd2code {

// UTF-8 / UTF-16 helpers and small string utilities shared across modules.

std::size_t utf8_length(std::string_view s);
std::vector<std::uint32_t> utf8_to_codepoints(std::string_view s);
std::string codepoints_to_utf8(const std::vector<std::uint32_t>& cps);

// UTF-16BE byte sequences as used by PSD unicode strings.
std::vector<std::uint8_t> utf8_to_utf16be(std::string_view s);
std::string utf16be_to_utf8(const std::uint8_t* data, std::size_t bytes);

std::string to_lower_ascii(std::string_view s);
std::string trim(std::string_view s);
bool contains_ci(std::string_view haystack, std::string_view needle);

// Lowercases, maps '_'/' '/camel boundaries to '-', drops other separators,
// collapses runs of '-' and trims them from the ends. Non-ASCII bytes are dropped.
std::string kebab_case(std::string_view s);

std::vector<std::string> split_lines(std::string_view s);

// Filename helpers (pure string manipulation, no filesystem access).
std::string file_stem(std::string_view filename);
std::string file_extension_lower(std::string_view filename);

std::string format_double(double v);        // compact %.9g, locale-free
std::string format_double_exact(double v);  // %.17g, parses back to the same bits

}  // namespace psd2code
