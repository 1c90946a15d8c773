#include "psd2code/text.hpp"

#include <cctype>
#include <cstdio>

namespace psd2code {

std::vector<std::uint32_t> utf8_to_codepoints(std::string_view s) {
  std::vector<std::uint32_t> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const std::uint8_t b = static_cast<std::uint8_t>(s[i]);
    std::uint32_t cp = 0;
    std::size_t len = 1;
    if (b < 0x80) {
      cp = b;
    } else if ((b >> 5) == 0x6) {
      cp = b & 0x1F;
      len = 2;
    } else if ((b >> 4) == 0xE) {
      cp = b & 0x0F;
      len = 3;
    } else if ((b >> 3) == 0x1E) {
      cp = b & 0x07;
      len = 4;
    } else {
      cp = 0xFFFD;  // stray continuation byte
    }
    if (i + len > s.size()) {
      out.push_back(0xFFFD);
      break;
    }
    bool ok = true;
    for (std::size_t k = 1; k < len; ++k) {
      const std::uint8_t c = static_cast<std::uint8_t>(s[i + k]);
      if ((c >> 6) != 0x2) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (c & 0x3F);
    }
    out.push_back(ok ? cp : 0xFFFD);
    i += ok ? len : 1;
  }
  return out;
}

std::size_t utf8_length(std::string_view s) { return utf8_to_codepoints(s).size(); }

std::string codepoints_to_utf8(const std::vector<std::uint32_t>& cps) {
  std::string out;
  for (std::uint32_t cp : cps) {
    if (cp < 0x80) {
      out.push_back(char(cp));
    } else if (cp < 0x800) {
      out.push_back(char(0xC0 | (cp >> 6)));
      out.push_back(char(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(char(0xE0 | (cp >> 12)));
      out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(char(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(char(0xF0 | (cp >> 18)));
      out.push_back(char(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(char(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(char(0x80 | (cp & 0x3F)));
    }
  }
  return out;
}

std::vector<std::uint8_t> utf8_to_utf16be(std::string_view s) {
  std::vector<std::uint8_t> out;
  for (std::uint32_t cp : utf8_to_codepoints(s)) {
    if (cp >= 0x10000) {
      cp -= 0x10000;
      const std::uint16_t hi = 0xD800 | std::uint16_t(cp >> 10);
      const std::uint16_t lo = 0xDC00 | std::uint16_t(cp & 0x3FF);
      out.push_back(std::uint8_t(hi >> 8));
      out.push_back(std::uint8_t(hi));
      out.push_back(std::uint8_t(lo >> 8));
      out.push_back(std::uint8_t(lo));
    } else {
      out.push_back(std::uint8_t(cp >> 8));
      out.push_back(std::uint8_t(cp));
    }
  }
  return out;
}

std::string utf16be_to_utf8(const std::uint8_t* data, std::size_t bytes) {
  std::vector<std::uint32_t> cps;
  for (std::size_t i = 0; i + 1 < bytes; i += 2) {
    std::uint32_t unit = (std::uint32_t(data[i]) << 8) | data[i + 1];
    if (unit >= 0xD800 && unit <= 0xDBFF && i + 3 < bytes) {
      const std::uint32_t lo = (std::uint32_t(data[i + 2]) << 8) | data[i + 3];
      if (lo >= 0xDC00 && lo <= 0xDFFF) {
        cps.push_back(0x10000 + ((unit - 0xD800) << 10) + (lo - 0xDC00));
        i += 2;
        continue;
      }
    }
    cps.push_back(unit);
  }
  return codepoints_to_utf8(cps);
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = char(c - 'A' + 'a');
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  const std::string h = to_lower_ascii(haystack);
  const std::string n = to_lower_ascii(needle);
  return h.find(n) != std::string::npos;
}

std::string kebab_case(std::string_view s) {
  std::string out;
  bool prev_lower_or_digit = false;
  bool pending_dash = false;
  for (char c : s) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (u >= 0x80) continue;
    if (std::isalnum(u)) {
      if (std::isupper(u)) {
        if (prev_lower_or_digit) pending_dash = true;
        c = char(std::tolower(u));
      }
      if (pending_dash && !out.empty()) out.push_back('-');
      pending_dash = false;
      out.push_back(c);
      prev_lower_or_digit = std::islower(u) || std::isdigit(u);
    } else {
      pending_dash = true;
      prev_lower_or_digit = false;
    }
  }
  return out;
}

std::vector<std::string> split_lines(std::string_view s) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == '\n') {
      std::string_view line = s.substr(start, i - start);
      if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
      lines.emplace_back(line);
      start = i + 1;
    }
  }
  if (!lines.empty() && lines.back().empty() && !s.empty() && s.back() == '\n') lines.pop_back();
  return lines;
}

std::string file_stem(std::string_view filename) {
  const std::size_t slash = filename.find_last_of("/\\");
  if (slash != std::string_view::npos) filename.remove_prefix(slash + 1);
  const std::size_t dot = filename.find_last_of('.');
  if (dot == std::string_view::npos || dot == 0) return std::string(filename);
  return std::string(filename.substr(0, dot));
}

std::string file_extension_lower(std::string_view filename) {
  const std::size_t slash = filename.find_last_of("/\\");
  if (slash != std::string_view::npos) filename.remove_prefix(slash + 1);
  const std::size_t dot = filename.find_last_of('.');
  if (dot == std::string_view::npos) return "";
  return to_lower_ascii(filename.substr(dot + 1));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

std::string format_double_exact(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace psd2code
