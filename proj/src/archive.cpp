#include "cone/archive.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <iterator>

#include "cone/config.hpp"
#include "cone/error.hpp"

namespace cone {

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks
  std::size_t offset = 0;
  while (offset < bytes.size()) {
    const std::size_t chunk = std::min<std::size_t>(bytes.size() - offset, 1u << 30);
    crc = crc32(crc, bytes.data() + offset, static_cast<uInt>(chunk));
    offset += chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

namespace {

class Writer {
 public:
  void bytes(const void* p, std::size_t n) {
    const auto* b = static_cast<const std::uint8_t*>(p);
    buf_.insert(buf_.end(), b, b + n);
  }
  void u8(std::uint8_t v) { buf_.push_back(v); }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int i = 0; i < 8; ++i) buf_.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
  }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    bytes(s.data(), s.size());
  }
  std::vector<std::uint8_t> finish() {
    const std::uint32_t crc = crc32_of(buf_);
    u32(crc);
    return std::move(buf_);
  }

 private:
  std::vector<std::uint8_t> buf_;
};

class Reader {
 public:
  Reader(std::span<const std::uint8_t> bytes, std::string source) : bytes_(bytes), source_(std::move(source)) {}

  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) throw ArchiveError(source_ + ": archive is truncated");
  }
  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return std::bit_cast<double>(v);
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
    pos_ += n;
    return s;
  }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::string source_;
  std::size_t pos_ = 0;
};

// Magic, then CRC over everything before the 4-byte trailer. Returns the payload without the trailer.
std::span<const std::uint8_t> verify(std::span<const std::uint8_t> bytes, const char (&magic)[5],
                                     const std::string& source) {
  if (bytes.size() < 8 || std::memcmp(bytes.data(), magic, 4) != 0)
    throw ArchiveError(source + ": not a " + std::string(magic, 4) + " archive");
  const auto body = bytes.first(bytes.size() - 4);
  Reader trailer(bytes.last(4), source);
  if (trailer.u32() != crc32_of(body))
    throw ArchiveError(source + ": checksum mismatch (file is truncated or corrupt)");
  return body;
}

void write_file(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("failed writing " + path);
}

std::vector<std::uint8_t> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

std::vector<std::uint8_t> serialize_model(const ConeModel& model) {
  Writer w;
  w.bytes("CONE", 4);
  w.u32(kModelArchiveVersion);
  w.str(model_config_to_text(model.config()));
  const auto params = model.parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const auto* p : params) {
    w.str(p->name);
    const auto& shape = p->value.shape();
    w.u32(static_cast<std::uint32_t>(shape.size()));
    for (auto d : shape) w.u32(static_cast<std::uint32_t>(d));
    for (double v : p->value.data()) w.f64(v);
  }
  return w.finish();
}

ConeModel deserialize_model(std::span<const std::uint8_t> bytes, const std::string& source) {
  Reader r(verify(bytes, "CONE", source), source);
  r.u32();  // magic, already checked
  const std::uint32_t version = r.u32();
  if (version != kModelArchiveVersion)
    throw ArchiveError(source + ": unsupported archive version " + std::to_string(version) + " (expected " +
                       std::to_string(kModelArchiveVersion) + ")");
  ConeModel model(model_config_from_text(r.str(), source));
  const std::uint32_t blocks = r.u32();
  if (blocks != model.parameters().size())
    throw ArchiveError(source + ": archive has " + std::to_string(blocks) + " blocks, model expects " +
                       std::to_string(model.parameters().size()));
  for (std::uint32_t b = 0; b < blocks; ++b) {
    const std::string name = r.str();
    const std::uint32_t rank = r.u32();
    std::vector<std::size_t> shape(rank);
    for (auto& d : shape) d = r.u32();
    nn::Parameter* p = model.find(name);
    if (!p) throw ArchiveError(source + ": unknown parameter block '" + name + "'");
    if (p->value.shape() != shape)
      throw ArchiveError(source + ": shape mismatch in block '" + name + "': archive " + nn::shape_string(shape) +
                         ", model " + nn::shape_string(p->value.shape()));
    for (double& v : p->value.data()) v = r.f64();
  }
  if (r.remaining() != 0) throw ArchiveError(source + ": trailing bytes after the last block");
  return model;
}

void save_model(const std::string& path, const ConeModel& model) { write_file(path, serialize_model(model)); }

ConeModel load_model(const std::string& path) { return deserialize_model(read_file(path), path); }

std::vector<std::uint8_t> serialize_embeddings(const EmbeddingFile& file) {
  const auto& m = file.matrix;
  if (m.nodes() == 0) throw ArchiveError("refusing to write an embedding file with zero nodes");
  if (file.node_ids.size() != m.nodes()) throw ArchiveError("node ID count does not match embedding columns");
  Writer w;
  w.bytes("CEMB", 4);
  w.u32(kEmbeddingArchiveVersion);
  w.u32(static_cast<std::uint32_t>(m.dim()));
  w.u32(static_cast<std::uint32_t>(m.nodes()));
  w.u8(static_cast<std::uint8_t>(m.role()));
  for (const auto& id : file.node_ids) w.str(id);
  for (double v : m.data()) w.f64(v);
  return w.finish();
}

EmbeddingFile deserialize_embeddings(std::span<const std::uint8_t> bytes, const std::string& source) {
  Reader r(verify(bytes, "CEMB", source), source);
  r.u32();
  const std::uint32_t version = r.u32();
  if (version != kEmbeddingArchiveVersion)
    throw ArchiveError(source + ": unsupported embedding file version " + std::to_string(version));
  const std::uint32_t p = r.u32(), n = r.u32();
  const std::uint8_t role = r.u8();
  if (n == 0) throw ArchiveError(source + ": embedding file has zero nodes");
  if (role > 1) throw ArchiveError(source + ": unknown embedding role " + std::to_string(role));
  EmbeddingFile out{EmbeddingMatrix(p, n, static_cast<EmbeddingRole>(role)), {}};
  out.node_ids.reserve(n);
  for (std::uint32_t i = 0; i < n; ++i) out.node_ids.push_back(r.str());
  for (double& v : out.matrix.data()) v = r.f64();
  if (r.remaining() != 0) throw ArchiveError(source + ": trailing bytes in embedding file");
  return out;
}

void save_embeddings(const std::string& path, const EmbeddingFile& file) {
  write_file(path, serialize_embeddings(file));
}

EmbeddingFile load_embeddings(const std::string& path) { return deserialize_embeddings(read_file(path), path); }

}  // namespace cone
