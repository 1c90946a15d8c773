#include "psd2code/raster/image.hpp"

#include <zlib.h>

#include <csetjmp>
#include <cstdio>
#include <cstring>

#include <jpeglib.h>

#include "psd2code/bytes.hpp"
#include "psd2code/io.hpp"

namespace psd2code::raster {

RasterImage RasterImage::solid(std::uint32_t w, std::uint32_t h, std::uint8_t r, std::uint8_t g,
                               std::uint8_t b, std::uint8_t a) {
  RasterImage img;
  img.width = w;
  img.height = h;
  img.pixels.resize(std::size_t(w) * h * 4);
  for (std::size_t i = 0; i < img.pixels.size(); i += 4) {
    img.pixels[i] = r;
    img.pixels[i + 1] = g;
    img.pixels[i + 2] = b;
    img.pixels[i + 3] = a;
  }
  return img;
}

// ---------------------------------------------------------------------------
// PNG

namespace {

constexpr std::uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', 0x0D, 0x0A, 0x1A, 0x0A};

int channels_for_color_type(int color_type) {
  switch (color_type) {
    case 0: return 1;  // grayscale
    case 2: return 3;  // truecolor
    case 3: return 1;  // palette
    case 4: return 2;  // gray + alpha
    case 6: return 4;  // rgba
    default: return 0;
  }
}

std::uint8_t paeth(std::uint8_t a, std::uint8_t b, std::uint8_t c) {
  const int p = int(a) + int(b) - int(c);
  const int pa = std::abs(p - int(a));
  const int pb = std::abs(p - int(b));
  const int pc = std::abs(p - int(c));
  if (pa <= pb && pa <= pc) return a;
  if (pb <= pc) return b;
  return c;
}

void unfilter_scanlines(std::vector<std::uint8_t>& raw, std::uint32_t width, std::uint32_t height,
                        int bpp, const std::string& name) {
  const std::size_t stride = std::size_t(width) * bpp;
  std::vector<std::uint8_t> prev(stride, 0);
  std::vector<std::uint8_t> line(stride);
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::size_t row_at = std::size_t(y) * (stride + 1);
    const std::uint8_t filter = raw[row_at];
    std::uint8_t* cur = raw.data() + row_at + 1;
    switch (filter) {
      case 0: break;
      case 1:  // Sub
        for (std::size_t i = bpp; i < stride; ++i) cur[i] = std::uint8_t(cur[i] + cur[i - bpp]);
        break;
      case 2:  // Up
        for (std::size_t i = 0; i < stride; ++i) cur[i] = std::uint8_t(cur[i] + prev[i]);
        break;
      case 3:  // Average
        for (std::size_t i = 0; i < stride; ++i) {
          const int left = i >= std::size_t(bpp) ? cur[i - bpp] : 0;
          cur[i] = std::uint8_t(cur[i] + ((left + prev[i]) >> 1));
        }
        break;
      case 4:  // Paeth
        for (std::size_t i = 0; i < stride; ++i) {
          const std::uint8_t left = i >= std::size_t(bpp) ? cur[i - bpp] : 0;
          const std::uint8_t up_left = i >= std::size_t(bpp) ? prev[i - bpp] : 0;
          cur[i] = std::uint8_t(cur[i] + paeth(left, prev[i], up_left));
        }
        break;
      default:
        throw AssetDecodeError(name, "png: unknown filter type " + std::to_string(filter));
    }
    std::memcpy(line.data(), cur, stride);
    prev.swap(line);
  }
}

}  // namespace

RasterImage decode_png(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), kPngSignature, 8) != 0)
    throw AssetDecodeError(name, "png: bad signature");

  std::uint32_t width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  std::vector<std::uint8_t> idat;
  std::vector<std::uint8_t> palette;       // rgb triples
  std::vector<std::uint8_t> palette_alpha; // tRNS entries
  bool saw_ihdr = false, saw_iend = false;

  try {
    ByteReader r(bytes.data() + 8, bytes.size() - 8);
    while (!r.eof() && !saw_iend) {
      const std::uint32_t len = r.u32();
      const std::string type = r.bytes(4);
      r.require(std::size_t(len) + 4);
      const std::string data = r.bytes(len);
      const std::uint32_t crc = r.u32();
      uLong check = crc32(0L, reinterpret_cast<const Bytef*>(type.data()), 4);
      check = crc32(check, reinterpret_cast<const Bytef*>(data.data()), len);
      if (std::uint32_t(check) != crc) throw AssetDecodeError(name, "png: chunk crc mismatch");

      if (type == "IHDR") {
        if (len != 13) throw AssetDecodeError(name, "png: bad IHDR length");
        ByteReader h(reinterpret_cast<const std::uint8_t*>(data.data()), data.size());
        width = h.u32();
        height = h.u32();
        bit_depth = h.u8();
        color_type = h.u8();
        const int compression = h.u8();
        const int filter = h.u8();
        const int interlace = h.u8();
        if (width == 0 || height == 0) throw AssetDecodeError(name, "png: zero dimension");
        if (bit_depth != 8) throw AssetDecodeError(name, "png: only 8-bit depth is supported");
        if (channels_for_color_type(color_type) == 0)
          throw AssetDecodeError(name, "png: unknown color type");
        if (compression != 0 || filter != 0)
          throw AssetDecodeError(name, "png: unsupported compression/filter method");
        if (interlace != 0) throw AssetDecodeError(name, "png: interlaced images are not supported");
        saw_ihdr = true;
      } else if (type == "PLTE") {
        palette.assign(data.begin(), data.end());
      } else if (type == "tRNS") {
        palette_alpha.assign(data.begin(), data.end());
      } else if (type == "IDAT") {
        idat.insert(idat.end(), data.begin(), data.end());
      } else if (type == "IEND") {
        saw_iend = true;
      }
      // Ancillary chunks are ignored.
    }
  } catch (const ByteRangeError&) {
    throw AssetDecodeError(name, "png: truncated file");
  }
  if (!saw_ihdr || !saw_iend || idat.empty()) throw AssetDecodeError(name, "png: missing chunks");

  const int channels = channels_for_color_type(color_type);
  const std::size_t stride = std::size_t(width) * channels;
  const std::size_t raw_size = (stride + 1) * height;
  std::vector<std::uint8_t> raw(raw_size);
  uLongf dest_len = raw_size;
  const int rc = uncompress(raw.data(), &dest_len, idat.data(), idat.size());
  if (rc != Z_OK || dest_len != raw_size) throw AssetDecodeError(name, "png: inflate failed");

  unfilter_scanlines(raw, width, height, channels, name);

  RasterImage img;
  img.width = width;
  img.height = height;
  img.pixels.resize(std::size_t(width) * height * 4);
  for (std::uint32_t y = 0; y < height; ++y) {
    const std::uint8_t* src = raw.data() + std::size_t(y) * (stride + 1) + 1;
    std::uint8_t* dst = img.at(0, y);
    for (std::uint32_t x = 0; x < width; ++x, dst += 4) {
      switch (color_type) {
        case 0: {
          const std::uint8_t g = src[x];
          dst[0] = dst[1] = dst[2] = g;
          dst[3] = 255;
          break;
        }
        case 2: {
          const std::uint8_t* p = src + std::size_t(x) * 3;
          dst[0] = p[0];
          dst[1] = p[1];
          dst[2] = p[2];
          dst[3] = 255;
          break;
        }
        case 3: {
          const std::size_t idx = src[x];
          if (idx * 3 + 2 >= palette.size())
            throw AssetDecodeError(name, "png: palette index out of range");
          dst[0] = palette[idx * 3];
          dst[1] = palette[idx * 3 + 1];
          dst[2] = palette[idx * 3 + 2];
          dst[3] = idx < palette_alpha.size() ? palette_alpha[idx] : 255;
          break;
        }
        case 4: {
          const std::uint8_t* p = src + std::size_t(x) * 2;
          dst[0] = dst[1] = dst[2] = p[0];
          dst[3] = p[1];
          break;
        }
        case 6: {
          const std::uint8_t* p = src + std::size_t(x) * 4;
          dst[0] = p[0];
          dst[1] = p[1];
          dst[2] = p[2];
          dst[3] = p[3];
          break;
        }
      }
    }
  }
  return img;
}

namespace {

void append_chunk(ByteWriter& w, const char* type, const std::vector<std::uint8_t>& data) {
  w.u32(std::uint32_t(data.size()));
  w.bytes(type);
  w.bytes(data);
  uLong crc = crc32(0L, reinterpret_cast<const Bytef*>(type), 4);
  if (!data.empty()) crc = crc32(crc, data.data(), data.size());
  w.u32(std::uint32_t(crc));
}

}  // namespace

std::vector<std::uint8_t> encode_png(const RasterImage& img) {
  if (img.width == 0 || img.height == 0)
    throw AssetDecodeError("", "png: refusing to encode a zero-dimension image");
  if (img.pixels.size() != std::size_t(img.width) * img.height * 4)
    throw AssetDecodeError("", "png: pixel buffer size mismatch");

  ByteWriter ihdr;
  ihdr.u32(img.width);
  ihdr.u32(img.height);
  ihdr.u8(8);   // bit depth
  ihdr.u8(6);   // rgba
  ihdr.u8(0);   // compression
  ihdr.u8(0);   // filter method
  ihdr.u8(0);   // non-interlaced

  const std::size_t stride = std::size_t(img.width) * 4;
  std::vector<std::uint8_t> raw((stride + 1) * img.height);
  for (std::uint32_t y = 0; y < img.height; ++y) {
    std::uint8_t* row = raw.data() + std::size_t(y) * (stride + 1);
    row[0] = 0;  // filter: none
    std::memcpy(row + 1, img.at(0, y), stride);
  }
  uLongf bound = compressBound(raw.size());
  std::vector<std::uint8_t> compressed(bound);
  if (compress2(compressed.data(), &bound, raw.data(), raw.size(), Z_DEFAULT_COMPRESSION) != Z_OK)
    throw AssetDecodeError("", "png: deflate failed");
  compressed.resize(bound);

  ByteWriter w;
  w.bytes(std::vector<std::uint8_t>(kPngSignature, kPngSignature + 8));
  append_chunk(w, "IHDR", ihdr.take());
  append_chunk(w, "IDAT", compressed);
  append_chunk(w, "IEND", {});
  return w.take();
}

void write_png(const RasterImage& img, const std::filesystem::path& path) {
  const auto bytes = encode_png(img);
  write_file_bytes(path, bytes.data(), bytes.size());
}

// ---------------------------------------------------------------------------
// JPEG (libjpeg)

namespace {

struct JpegErrorMgr {
  jpeg_error_mgr pub;
  std::jmp_buf jump;
  char message[JMSG_LENGTH_MAX];
};

void jpeg_error_exit(j_common_ptr cinfo) {
  auto* err = reinterpret_cast<JpegErrorMgr*>(cinfo->err);
  (*cinfo->err->format_message)(cinfo, err->message);
  std::longjmp(err->jump, 1);
}

}  // namespace

RasterImage decode_jpeg(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;

  RasterImage img;
  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    throw AssetDecodeError(name, std::string("jpeg: ") + err.message);
  }
  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);
  cinfo.out_color_space = JCS_RGB;
  jpeg_start_decompress(&cinfo);

  img.width = cinfo.output_width;
  img.height = cinfo.output_height;
  img.pixels.resize(std::size_t(img.width) * img.height * 4);
  std::vector<std::uint8_t> row(std::size_t(img.width) * cinfo.output_components);
  while (cinfo.output_scanline < cinfo.output_height) {
    const std::uint32_t y = cinfo.output_scanline;
    JSAMPROW rows[1] = {row.data()};
    jpeg_read_scanlines(&cinfo, rows, 1);
    std::uint8_t* dst = img.at(0, y);
    for (std::uint32_t x = 0; x < img.width; ++x, dst += 4) {
      dst[0] = row[x * 3];
      dst[1] = row[x * 3 + 1];
      dst[2] = row[x * 3 + 2];
      dst[3] = 255;
    }
  }
  jpeg_finish_decompress(&cinfo);
  jpeg_destroy_decompress(&cinfo);
  return img;
}

RasterImage decode_image(const std::filesystem::path& path) {
  std::vector<std::uint8_t> bytes;
  try {
    bytes = read_file_bytes(path);
  } catch (const IoError& e) {
    throw AssetDecodeError(path.filename().string(), e.what());
  }
  const std::string name = path.filename().string();
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), kPngSignature, 8) == 0)
    return decode_png(bytes, name);
  if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) return decode_jpeg(bytes, name);
  throw AssetDecodeError(name, "unrecognized image format");
}

}  // namespace psd2code::raster
