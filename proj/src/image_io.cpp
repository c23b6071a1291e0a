#include "entroseed/image_io.hpp"

#include <jpeglib.h>
#include <png.h>

#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

namespace entroseed {

namespace {

// ---------------------------------------------------------------------------
// PNM (P2/P3 ASCII, P5/P6 binary)
// ---------------------------------------------------------------------------

class PnmReader {
 public:
  PnmReader(const std::vector<std::uint8_t>& bytes, const std::string& name)
      : bytes_(bytes), name_(name) {}

  // Next whitespace-delimited non-negative integer token, skipping
  // '#'-comments. Valid anywhere in the header and in ASCII sample data.
  int next_int() {
    skip_separators();
    if (pos_ >= bytes_.size())
      throw IoError(name_ + ": truncated PNM input");
    if (!std::isdigit(bytes_[pos_]))
      throw FormatError(name_ + ": malformed PNM token");
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000)
        throw FormatError(name_ + ": PNM value out of range");
      ++pos_;
    }
    return static_cast<int>(value);
  }

  // Consumes the single whitespace byte separating the maxval from binary
  // sample data.
  void consume_raster_separator() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw FormatError(name_ + ": missing separator before PNM raster");
    ++pos_;
  }

  const std::uint8_t* raster(std::size_t count) {
    if (bytes_.size() - pos_ < count)
      throw IoError(name_ + ": truncated PNM raster");
    return bytes_.data() + pos_;
  }

 private:
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::vector<std::uint8_t>& bytes_;
  std::string name_;
  std::size_t pos_ = 2;  // past the magic
};

PixelGrid load_pnm(const std::vector<std::uint8_t>& bytes,
                   const std::string& name) {
  const char kind = static_cast<char>(bytes[1]);
  const bool ascii = kind == '2' || kind == '3';
  const int channels = (kind == '3' || kind == '6') ? 3 : 1;

  PnmReader reader(bytes, name);
  PixelGrid grid;
  grid.width = reader.next_int();
  grid.height = reader.next_int();
  const int maxval = reader.next_int();
  if (grid.width < 1 || grid.height < 1)
    throw FormatError(name + ": non-positive PNM dimensions");
  if (maxval > 255)
    throw FormatError(name + ": only 8-bit samples are supported");
  if (maxval < 1) throw FormatError(name + ": invalid PNM maxval");

  grid.channels = channels;
  const std::size_t count = static_cast<std::size_t>(grid.width) *
                            grid.height * channels;
  grid.data.resize(count);
  if (ascii) {
    for (std::size_t i = 0; i < count; ++i) {
      const int v = reader.next_int();
      if (v > maxval)
        throw FormatError(name + ": PNM sample exceeds maxval");
      grid.data[i] = static_cast<std::uint8_t>(v);
    }
  } else {
    reader.consume_raster_separator();
    const std::uint8_t* src = reader.raster(count);
    for (std::size_t i = 0; i < count; ++i) {
      if (src[i] > maxval)
        throw FormatError(name + ": PNM sample exceeds maxval");
      grid.data[i] = src[i];
    }
  }
  return grid;
}

// ---------------------------------------------------------------------------
// PNG via libpng
// ---------------------------------------------------------------------------

struct PngError {
  std::string message;
};

// libpng reports errors through a longjmp; the callback records the message
// first so the catch site can rethrow it as a FormatError.
void png_error_fn(png_structp png, png_const_charp msg) {
  auto* err = static_cast<PngError*>(png_get_error_ptr(png));
  if (err && err->message.empty()) err->message = msg;
  std::longjmp(png_jmpbuf(png), 1);
}

void png_warning_fn(png_structp, png_const_charp) {}

struct PngReadState {
  const std::uint8_t* data;
  std::size_t size;
  std::size_t pos;
};

void png_read_fn(png_structp png, png_bytep out, png_size_t n) {
  auto* state = static_cast<PngReadState*>(png_get_io_ptr(png));
  if (state->size - state->pos < n)
    png_error(png, "unexpected end of PNG stream");
  std::memcpy(out, state->data + state->pos, n);
  state->pos += n;
}

PixelGrid load_png(const std::vector<std::uint8_t>& bytes,
                   const std::string& name) {
  PngError err;
  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &err,
                                           png_error_fn, png_warning_fn);
  if (!png) throw IoError(name + ": failed to initialize PNG reader");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw IoError(name + ": failed to initialize PNG reader");
  }

  PngReadState state{bytes.data(), bytes.size(), 0};
  PixelGrid grid;
  std::vector<png_bytep> rows;
  // volatile: read after the longjmp, written between setjmp and longjmp.
  volatile bool truncated = false;

  if (setjmp(png_jmpbuf(png))) {
    std::string message = err.message.empty() ? "PNG decode failed"
                                              : err.message;
    png_destroy_read_struct(&png, &info, nullptr);
    if (truncated || message.find("end of") != std::string::npos)
      throw IoError(name + ": " + message);
    throw FormatError(name + ": " + message);
  }

  png_set_read_fn(png, &state, png_read_fn);
  png_read_info(png, info);

  const png_uint_32 width = png_get_image_width(png, info);
  const png_uint_32 height = png_get_image_height(png, info);
  const int bit_depth = png_get_bit_depth(png, info);
  const int color_type = png_get_color_type(png, info);

  if (bit_depth == 16) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(name + ": only 8-bit samples are supported");
  }

  if (color_type == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(png);
  if (color_type == PNG_COLOR_TYPE_GRAY && bit_depth < 8)
    png_set_expand_gray_1_2_4_to_8(png);
  if (png_get_valid(png, info, PNG_INFO_tRNS)) png_set_tRNS_to_alpha(png);
  png_set_strip_alpha(png);
  png_read_update_info(png, info);

  const int channels = png_get_channels(png, info);
  if (channels != 1 && channels != 3) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(name + ": unsupported PNG channel layout");
  }

  grid.width = static_cast<int>(width);
  grid.height = static_cast<int>(height);
  grid.channels = channels;
  grid.data.resize(static_cast<std::size_t>(width) * height * channels);

  const std::size_t rowbytes = png_get_rowbytes(png, info);
  if (rowbytes != static_cast<std::size_t>(width) * channels) {
    png_destroy_read_struct(&png, &info, nullptr);
    throw FormatError(name + ": unexpected PNG row size");
  }
  rows.resize(height);
  for (png_uint_32 y = 0; y < height; ++y)
    rows[y] = grid.data.data() + static_cast<std::size_t>(y) * rowbytes;

  truncated = true;  // failures past this point are short reads
  png_read_image(png, rows.data());
  png_read_end(png, nullptr);
  png_destroy_read_struct(&png, &info, nullptr);
  return grid;
}

// ---------------------------------------------------------------------------
// JPEG via libjpeg
// ---------------------------------------------------------------------------

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

// Silences libjpeg's stderr chatter but keeps the warning count: premature
// EOF in the entropy-coded data is reported as a warning, not via error_exit,
// and would otherwise decode silently into grey padding.
void jpeg_emit_message(j_common_ptr cinfo, int msg_level) {
  if (msg_level < 0) ++cinfo->err->num_warnings;
}

PixelGrid load_jpeg(const std::vector<std::uint8_t>& bytes,
                    const std::string& name) {
  jpeg_decompress_struct cinfo;
  JpegErrorMgr err;
  err.message[0] = '\0';
  cinfo.err = jpeg_std_error(&err.pub);
  err.pub.error_exit = jpeg_error_exit;
  err.pub.emit_message = jpeg_emit_message;

  PixelGrid grid;

  if (setjmp(err.jump)) {
    jpeg_destroy_decompress(&cinfo);
    const std::string message =
        err.message[0] ? err.message : "JPEG decode failed";
    if (message.find("Premature end") != std::string::npos)
      throw IoError(name + ": " + message);
    throw FormatError(name + ": " + message);
  }

  jpeg_create_decompress(&cinfo);
  jpeg_mem_src(&cinfo, bytes.data(), static_cast<unsigned long>(bytes.size()));
  jpeg_read_header(&cinfo, TRUE);

  if (cinfo.data_precision != 8) {
    jpeg_destroy_decompress(&cinfo);
    throw FormatError(name + ": only 8-bit samples are supported");
  }

  cinfo.out_color_space =
      cinfo.jpeg_color_space == JCS_GRAYSCALE ? JCS_GRAYSCALE : JCS_RGB;
  jpeg_start_decompress(&cinfo);

  grid.width = static_cast<int>(cinfo.output_width);
  grid.height = static_cast<int>(cinfo.output_height);
  grid.channels = cinfo.output_components;
  if (grid.channels != 1 && grid.channels != 3) {
    jpeg_destroy_decompress(&cinfo);
    throw FormatError(name + ": unsupported JPEG channel layout");
  }
  grid.data.resize(static_cast<std::size_t>(grid.width) * grid.height *
                   grid.channels);

  const std::size_t stride =
      static_cast<std::size_t>(grid.width) * grid.channels;
  while (cinfo.output_scanline < cinfo.output_height) {
    JSAMPROW row = grid.data.data() + cinfo.output_scanline * stride;
    jpeg_read_scanlines(&cinfo, &row, 1);
  }
  jpeg_finish_decompress(&cinfo);
  const bool corrupt = err.pub.num_warnings > 0;
  jpeg_destroy_decompress(&cinfo);
  if (corrupt) throw IoError(name + ": truncated or corrupt JPEG data");
  return grid;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path.string() + ": cannot open file");
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError(path.string() + ": read failed");
  return bytes;
}

}  // namespace

PixelGrid load_image(const std::filesystem::path& path) {
  const std::vector<std::uint8_t> bytes = read_file(path);
  const std::string name = path.string();

  static const std::uint8_t png_magic[8] = {0x89, 'P', 'N', 'G',
                                            '\r', '\n', 0x1a, '\n'};
  PixelGrid grid;
  if (bytes.size() >= 8 && std::memcmp(bytes.data(), png_magic, 8) == 0) {
    grid = load_png(bytes, name);
  } else if (bytes.size() >= 2 && bytes[0] == 0xFF && bytes[1] == 0xD8) {
    grid = load_jpeg(bytes, name);
  } else if (bytes.size() >= 2 && bytes[0] == 'P' && bytes[1] >= '2' &&
             bytes[1] <= '6' && bytes[1] != '4') {
    grid = load_pnm(bytes, name);
  } else {
    throw FormatError(name + ": unrecognized image format");
  }
  check_grid(grid);
  return grid;
}

PixelGrid to_grayscale(const PixelGrid& grid) {
  check_grid(grid);
  if (grid.channels == 1) return grid;

  PixelGrid gray;
  gray.width = grid.width;
  gray.height = grid.height;
  gray.channels = 1;
  gray.data.resize(static_cast<std::size_t>(grid.pixel_count()));
  for (int i = 0; i < grid.pixel_count(); ++i) {
    const std::uint8_t* p = grid.pixel(i);
    const double luma = 0.299 * p[0] + 0.587 * p[1] + 0.114 * p[2];
    gray.data[i] = static_cast<std::uint8_t>(std::floor(luma + 0.5));
  }
  return gray;
}

}  // namespace entroseed
