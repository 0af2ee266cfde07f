#include "mlrank/idx.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include "mlrank/errors.hpp"

namespace mlrank {

namespace {

class ByteReader {
 public:
  explicit ByteReader(const std::filesystem::path& path) : path_(path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("idx: cannot open " + path.string());
    bytes_.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(bytes_[offset_++]);
    return v;
  }

  void copy_to(std::uint8_t* out, std::size_t n) {
    need(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(bytes_[offset_ + i]);
    offset_ += n;
  }

  [[nodiscard]] std::size_t offset() const noexcept { return offset_; }

  [[noreturn]] void fail(const std::string& what, std::size_t at) const {
    std::ostringstream msg;
    msg << "idx: " << what << " at byte " << at << " of " << path_.string();
    throw DataError(msg.str());
  }

 private:
  void need(std::size_t n) const {
    if (bytes_.size() - offset_ < n) fail("truncated file", offset_);
  }

  std::filesystem::path path_;
  std::vector<char> bytes_;
  std::size_t offset_ = 0;
};

void check_magic(ByteReader& r, std::uint32_t expected) {
  const std::uint32_t magic = r.u32();
  if (magic != expected) {
    std::ostringstream what;
    what << "bad magic 0x" << std::hex << magic << " (expected 0x" << expected << ")";
    r.fail(what.str(), 0);
  }
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v >> 24), static_cast<char>(v >> 16), static_cast<char>(v >> 8),
                     static_cast<char>(v)};
  out.write(b, 4);
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("idx: cannot write " + path.string());
  return out;
}

}  // namespace

IdxImages read_idx_images(const std::filesystem::path& path) {
  ByteReader r(path);
  check_magic(r, kIdxImageMagic);
  IdxImages img;
  img.count = r.u32();
  img.rows = r.u32();
  img.cols = r.u32();
  img.pixels.resize(static_cast<std::size_t>(img.count) * img.rows * img.cols);
  r.copy_to(img.pixels.data(), img.pixels.size());
  return img;
}

std::vector<std::uint8_t> read_idx_labels(const std::filesystem::path& path) {
  ByteReader r(path);
  check_magic(r, kIdxLabelMagic);
  std::vector<std::uint8_t> labels(r.u32());
  r.copy_to(labels.data(), labels.size());
  return labels;
}

void write_idx_images(const std::filesystem::path& path, const IdxImages& images) {
  require_same_size(images.pixels.size(),
                    static_cast<std::size_t>(images.count) * images.rows * images.cols, "idx images");
  std::ofstream out = open_out(path);
  put_u32(out, kIdxImageMagic);
  put_u32(out, images.count);
  put_u32(out, images.rows);
  put_u32(out, images.cols);
  out.write(reinterpret_cast<const char*>(images.pixels.data()),
            static_cast<std::streamsize>(images.pixels.size()));
}

void write_idx_labels(const std::filesystem::path& path, const std::vector<std::uint8_t>& labels) {
  std::ofstream out = open_out(path);
  put_u32(out, kIdxLabelMagic);
  put_u32(out, static_cast<std::uint32_t>(labels.size()));
  out.write(reinterpret_cast<const char*>(labels.data()), static_cast<std::streamsize>(labels.size()));
}

GlyphBank load_idx_glyphs(const std::filesystem::path& images_path,
                          const std::filesystem::path& labels_path) {
  const IdxImages images = read_idx_images(images_path);
  const std::vector<std::uint8_t> labels = read_idx_labels(labels_path);
  if (labels.size() != images.count) {
    throw DataError("idx: " + std::to_string(labels.size()) + " labels for " +
                    std::to_string(images.count) + " images (label count at byte 4)");
  }
  if (images.rows != images.cols) throw DataError("idx: non-square images (dimensions at byte 8)");

  GlyphBank bank;
  const std::size_t n = images.rows;
  for (std::size_t i = 0; i < images.count; ++i) {
    if (labels[i] > 9) {
      throw DataError("idx: label " + std::to_string(labels[i]) + " at byte " + std::to_string(8 + i));
    }
    Glyph g{n, std::vector<double>(n * n)};
    for (std::size_t p = 0; p < n * n; ++p) g.pixels[p] = images.pixels[i * n * n + p] / 255.0;
    bank.by_digit[labels[i]].push_back(std::move(g));
  }
  return bank;
}

}  // namespace mlrank
