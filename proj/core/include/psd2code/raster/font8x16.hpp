#pragma once

#include <cstdint>

namespace psd2code::raster {

// 8x16 bitmap glyphs for ASCII 32..126, one byte per row, MSB = leftmost pixel.
// Index 95 is the fallback box glyph used for code points outside the table.
inline constexpr int kFontGlyphWidth = 8;
inline constexpr int kFontGlyphHeight = 16;
inline constexpr int kFontFirstChar = 32;
inline constexpr int kFontLastChar = 126;
inline constexpr int kFontFallbackIndex = 95;

inline constexpr std::uint8_t kFontGlyphs[96][16] = {
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00},  // 32 ' '
  {0x00,0x00,0x00,0x00,0x08,0x08,0x08,0x08,0x08,0x08,0x00,0x00,0x08,0x08,0x00,0x00},  // 33 '!'
  {0x00,0x00,0x00,0x00,0x34,0x34,0x34,0x34,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00},  // 34 '"'
  {0x00,0x00,0x00,0x00,0x1a,0x12,0x12,0x7f,0x34,0x24,0xff,0x2c,0x68,0x48,0x00,0x00},  // 35 '#'
  {0x00,0x00,0x00,0x08,0x08,0x3c,0x2a,0x68,0x28,0x1c,0x0a,0x0b,0x4a,0x3c,0x08,0x08},  // 36 '$'
  {0x00,0x00,0x00,0x00,0x70,0x90,0x90,0x73,0x0c,0x10,0x46,0x09,0x09,0x06,0x00,0x00},  // 37 '%'
  {0x00,0x00,0x00,0x00,0x3c,0x20,0x20,0x20,0x30,0x59,0xcd,0x47,0x66,0x3d,0x00,0x00},  // 38 '&'
  {0x00,0x00,0x00,0x00,0x08,0x08,0x08,0x08,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00},  // 39 '\''
  {0x00,0x00,0x00,0x04,0x08,0x08,0x18,0x10,0x10,0x10,0x10,0x18,0x08,0x08,0x04,0x00},  // 40 '('
  {0x00,0x00,0x00,0x10,0x10,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x10,0x10,0x00},  // 41 ')'
  {0x00,0x00,0x00,0x00,0x08,0x4a,0x1c,0x1c,0x4a,0x08,0x00,0x00,0x00,0x00,0x00,0x00},  // 42 '*'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x08,0x08,0x08,0x7f,0x08,0x08,0x08,0x00,0x00,0x00},  // 43 '+'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x18,0x18,0x18,0x10},  // 44 ','
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x3c,0x00,0x00,0x00,0x00,0x00},  // 45 '-'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x18,0x18,0x00,0x00},  // 46 '.'
  {0x00,0x00,0x00,0x00,0x02,0x06,0x04,0x04,0x08,0x08,0x10,0x10,0x30,0x20,0x60,0x40},  // 47 '/'
  {0x00,0x00,0x00,0x00,0x1c,0x26,0x62,0x42,0x42,0x4a,0x42,0x62,0x26,0x1c,0x00,0x00},  // 48 '0'
  {0x00,0x00,0x00,0x00,0x18,0x28,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x3e,0x00,0x00},  // 49 '1'
  {0x00,0x00,0x00,0x00,0x3c,0x46,0x02,0x02,0x06,0x0c,0x18,0x30,0x20,0x7e,0x00,0x00},  // 50 '2'
  {0x00,0x00,0x00,0x00,0x3c,0x46,0x02,0x06,0x1c,0x06,0x02,0x02,0x46,0x3c,0x00,0x00},  // 51 '3'
  {0x00,0x00,0x00,0x00,0x0c,0x0c,0x14,0x24,0x24,0x44,0x7f,0x04,0x04,0x04,0x00,0x00},  // 52 '4'
  {0x00,0x00,0x00,0x00,0x7e,0x60,0x60,0x7c,0x06,0x02,0x02,0x02,0x46,0x3c,0x00,0x00},  // 53 '5'
  {0x00,0x00,0x00,0x00,0x1c,0x22,0x60,0x40,0x5c,0x62,0x62,0x62,0x22,0x1c,0x00,0x00},  // 54 '6'
  {0x00,0x00,0x00,0x00,0x7e,0x02,0x06,0x04,0x0c,0x08,0x08,0x18,0x10,0x30,0x00,0x00},  // 55 '7'
  {0x00,0x00,0x00,0x00,0x3c,0x66,0x62,0x26,0x3c,0x66,0x42,0x42,0x62,0x3c,0x00,0x00},  // 56 '8'
  {0x00,0x00,0x00,0x00,0x3c,0x66,0x42,0x42,0x66,0x3a,0x02,0x02,0x06,0x3c,0x00,0x00},  // 57 '9'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x18,0x18,0x00,0x00,0x00,0x18,0x18,0x00,0x00},  // 58 ':'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x18,0x18,0x00,0x00,0x00,0x18,0x18,0x18,0x10},  // 59 ';'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x01,0x0e,0x38,0x60,0x38,0x0e,0x01,0x00,0x00,0x00},  // 60 '<'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x7f,0x00,0x00,0x7f,0x00,0x00,0x00,0x00,0x00},  // 61 '='
  {0x00,0x00,0x00,0x00,0x00,0x00,0x40,0x70,0x0e,0x03,0x0e,0x70,0x40,0x00,0x00,0x00},  // 62 '>'
  {0x00,0x00,0x00,0x00,0x1c,0x26,0x02,0x06,0x0c,0x18,0x18,0x00,0x18,0x18,0x00,0x00},  // 63 '?'
  {0x00,0x00,0x00,0x00,0x1e,0x23,0x41,0x4f,0x91,0x91,0x91,0x91,0x4f,0x40,0x20,0x1e},  // 64 '@'
  {0x00,0x00,0x00,0x00,0x18,0x1c,0x14,0x34,0x24,0x22,0x7e,0x42,0x43,0xc1,0x00,0x00},  // 65 'A'
  {0x00,0x00,0x00,0x00,0x7c,0x62,0x62,0x62,0x7c,0x62,0x63,0x63,0x62,0x7c,0x00,0x00},  // 66 'B'
  {0x00,0x00,0x00,0x00,0x1e,0x30,0x60,0x60,0x40,0x40,0x60,0x60,0x30,0x1e,0x00,0x00},  // 67 'C'
  {0x00,0x00,0x00,0x00,0x78,0x46,0x42,0x42,0x43,0x43,0x42,0x42,0x46,0x78,0x00,0x00},  // 68 'D'
  {0x00,0x00,0x00,0x00,0x7e,0x60,0x60,0x60,0x7e,0x60,0x60,0x60,0x60,0x7f,0x00,0x00},  // 69 'E'
  {0x00,0x00,0x00,0x00,0x3f,0x20,0x20,0x20,0x3e,0x20,0x20,0x20,0x20,0x20,0x00,0x00},  // 70 'F'
  {0x00,0x00,0x00,0x00,0x1c,0x20,0x60,0x40,0x40,0x47,0x43,0x63,0x23,0x1e,0x00,0x00},  // 71 'G'
  {0x00,0x00,0x00,0x00,0x43,0x43,0x43,0x43,0x7f,0x43,0x43,0x43,0x43,0x43,0x00,0x00},  // 72 'H'
  {0x00,0x00,0x00,0x00,0x7e,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x7e,0x00,0x00},  // 73 'I'
  {0x00,0x00,0x00,0x00,0x1e,0x06,0x06,0x06,0x06,0x06,0x06,0x04,0x44,0x38,0x00,0x00},  // 74 'J'
  {0x00,0x00,0x00,0x00,0x43,0x46,0x4c,0x58,0x78,0x68,0x4c,0x46,0x42,0x43,0x00,0x00},  // 75 'K'
  {0x00,0x00,0x00,0x00,0x60,0x60,0x60,0x60,0x60,0x60,0x60,0x60,0x60,0x7f,0x00,0x00},  // 76 'L'
  {0x00,0x00,0x00,0x00,0x63,0x67,0x67,0x55,0x59,0x59,0x41,0x41,0x41,0x41,0x00,0x00},  // 77 'M'
  {0x00,0x00,0x00,0x00,0x62,0x62,0x72,0x52,0x5a,0x4a,0x4a,0x46,0x46,0x42,0x00,0x00},  // 78 'N'
  {0x00,0x00,0x00,0x00,0x3c,0x26,0x62,0x43,0x43,0x43,0x43,0x62,0x26,0x3c,0x00,0x00},  // 79 'O'
  {0x00,0x00,0x00,0x00,0x7c,0x62,0x63,0x63,0x62,0x7c,0x60,0x60,0x60,0x60,0x00,0x00},  // 80 'P'
  {0x00,0x00,0x00,0x00,0x3c,0x26,0x62,0x43,0x43,0x43,0x43,0x62,0x26,0x3c,0x04,0x02},  // 81 'Q'
  {0x00,0x00,0x00,0x00,0x7c,0x46,0x42,0x42,0x46,0x7c,0x44,0x42,0x43,0x41,0x00,0x00},  // 82 'R'
  {0x00,0x00,0x00,0x00,0x3c,0x62,0x40,0x60,0x38,0x0e,0x02,0x02,0x42,0x3c,0x00,0x00},  // 83 'S'
  {0x00,0x00,0x00,0x00,0xff,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x00,0x00},  // 84 'T'
  {0x00,0x00,0x00,0x00,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x62,0x3c,0x00,0x00},  // 85 'U'
  {0x00,0x00,0x00,0x00,0x43,0x43,0x42,0x62,0x26,0x24,0x34,0x14,0x18,0x18,0x00,0x00},  // 86 'V'
  {0x00,0x00,0x00,0x00,0x81,0xc1,0xc1,0x59,0x59,0x53,0x56,0x66,0x66,0x66,0x00,0x00},  // 87 'W'
  {0x00,0x00,0x00,0x00,0x43,0x22,0x34,0x1c,0x18,0x1c,0x34,0x26,0x62,0xc1,0x00,0x00},  // 88 'X'
  {0x00,0x00,0x00,0x00,0x43,0x62,0x26,0x34,0x1c,0x18,0x08,0x08,0x08,0x08,0x00,0x00},  // 89 'Y'
  {0x00,0x00,0x00,0x00,0x7f,0x03,0x06,0x04,0x0c,0x18,0x10,0x30,0x60,0x7f,0x00,0x00},  // 90 'Z'
  {0x00,0x00,0x00,0x1c,0x10,0x10,0x10,0x10,0x10,0x10,0x10,0x10,0x10,0x10,0x1c,0x00},  // 91 '['
  {0x00,0x00,0x00,0x00,0x40,0x60,0x20,0x30,0x10,0x10,0x08,0x08,0x04,0x04,0x06,0x02},  // 92 'backslash'
  {0x00,0x00,0x00,0x38,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x38,0x00},  // 93 ']'
  {0x00,0x00,0x00,0x00,0x18,0x3c,0x26,0x43,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00},  // 94 '^'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00},  // 95 '_'
  {0x00,0x00,0x30,0x10,0x08,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00},  // 96 '`'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3c,0x06,0x02,0x3e,0x62,0x42,0x66,0x3a,0x00,0x00},  // 97 'a'
  {0x00,0x00,0x00,0x60,0x60,0x60,0x7c,0x62,0x62,0x63,0x63,0x62,0x62,0x7c,0x00,0x00},  // 98 'b'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x1e,0x30,0x20,0x60,0x60,0x20,0x30,0x1e,0x00,0x00},  // 99 'c'
  {0x00,0x00,0x00,0x02,0x02,0x02,0x3a,0x66,0x42,0x42,0x42,0x42,0x66,0x3a,0x00,0x00},  // 100 'd'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x1c,0x22,0x42,0x7f,0x40,0x40,0x22,0x1c,0x00,0x00},  // 101 'e'
  {0x00,0x00,0x00,0x0e,0x08,0x18,0x7e,0x18,0x18,0x18,0x18,0x18,0x18,0x18,0x00,0x00},  // 102 'f'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3a,0x66,0x42,0x42,0x42,0x42,0x66,0x3a,0x02,0x06},  // 103 'g'
  {0x00,0x00,0x00,0x60,0x60,0x60,0x7c,0x66,0x62,0x62,0x62,0x62,0x62,0x62,0x00,0x00},  // 104 'h'
  {0x00,0x00,0x00,0x08,0x08,0x00,0x38,0x08,0x08,0x08,0x08,0x08,0x08,0x7e,0x00,0x00},  // 105 'i'
  {0x00,0x00,0x00,0x08,0x08,0x00,0x38,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08},  // 106 'j'
  {0x00,0x00,0x00,0x20,0x20,0x20,0x22,0x24,0x28,0x38,0x2c,0x24,0x22,0x23,0x00,0x00},  // 107 'k'
  {0x00,0x00,0x00,0x70,0x10,0x10,0x10,0x10,0x10,0x10,0x10,0x10,0x18,0x0e,0x00,0x00},  // 108 'l'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x76,0x5b,0x49,0x49,0x49,0x49,0x49,0x49,0x00,0x00},  // 109 'm'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x7c,0x66,0x62,0x62,0x62,0x62,0x62,0x62,0x00,0x00},  // 110 'n'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3c,0x26,0x42,0x42,0x42,0x42,0x26,0x3c,0x00,0x00},  // 111 'o'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x7c,0x66,0x62,0x63,0x63,0x62,0x66,0x7c,0x60,0x60},  // 112 'p'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3a,0x26,0x42,0x42,0x42,0x42,0x26,0x3a,0x02,0x02},  // 113 'q'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3f,0x38,0x30,0x30,0x30,0x30,0x30,0x30,0x00,0x00},  // 114 'r'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3c,0x22,0x20,0x38,0x0e,0x02,0x06,0x3c,0x00,0x00},  // 115 's'
  {0x00,0x00,0x00,0x00,0x10,0x10,0x7e,0x10,0x10,0x10,0x10,0x10,0x18,0x0e,0x00,0x00},  // 116 't'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x62,0x62,0x62,0x62,0x62,0x62,0x26,0x3a,0x00,0x00},  // 117 'u'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x43,0x42,0x22,0x26,0x24,0x14,0x1c,0x18,0x00,0x00},  // 118 'v'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x81,0xc1,0x49,0x5b,0x52,0x76,0x66,0x26,0x00,0x00},  // 119 'w'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x62,0x26,0x1c,0x18,0x18,0x34,0x26,0x43,0x00,0x00},  // 120 'x'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x43,0x62,0x22,0x26,0x34,0x14,0x18,0x08,0x18,0x10},  // 121 'y'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x3e,0x06,0x04,0x08,0x18,0x30,0x20,0x7e,0x00,0x00},  // 122 'z'
  {0x00,0x00,0x00,0x0e,0x08,0x08,0x08,0x08,0x18,0x30,0x18,0x08,0x08,0x08,0x08,0x0e},  // 123 '{'
  {0x00,0x00,0x00,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08,0x08},  // 124 '|'
  {0x00,0x00,0x00,0x30,0x18,0x08,0x08,0x08,0x08,0x0e,0x08,0x08,0x08,0x08,0x18,0x30},  // 125 '}'
  {0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x00,0x71,0x0e,0x00,0x00,0x00,0x00,0x00},  // 126 '~'
  {0x00,0x7e,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x42,0x7e,0x00},  // fallback box
};

}  // namespace psd2code::raster
