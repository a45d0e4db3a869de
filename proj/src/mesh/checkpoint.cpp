#include "lanegrid/mesh/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "lanegrid/error.hpp"

namespace lanegrid::mesh {

namespace {

constexpr char kMagic[4] = {'L', 'G', 'R', 'D'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<unsigned char>& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_u64(std::vector<unsigned char>& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<unsigned char>(v >> (8 * i)));
}

void put_f64(std::vector<unsigned char>& b, double v) {
  put_u64(b, std::bit_cast<std::uint64_t>(v));
}

struct reader {
  const unsigned char* p;
  const unsigned char* end;

  void need(std::size_t n) const {
    if (static_cast<std::size_t>(end - p) < n)
      throw state_error("checkpoint truncated");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(p[i]) << (8 * i);
    p += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(p[i]) << (8 * i);
    p += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::uint8_t u8() {
    need(1);
    return *p++;
  }
};

void append_leaf(std::vector<unsigned char>& out, const subgrid& g) {
  put_u64(out, g.key);
  out.push_back(static_cast<unsigned char>(g.level));
  for (int f = 0; f < field_count; ++f)
    for (int z = 1; z <= subgrid_extent; ++z)
      for (int y = 1; y <= subgrid_extent; ++y)
        for (int x = 1; x <= subgrid_extent; ++x)
          put_f64(out, g.at(f, x, y, z));
}

void write_file(const std::string& path, const std::vector<unsigned char>& b) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw state_error("cannot open checkpoint for writing: " + path);
  f.write(reinterpret_cast<const char*>(b.data()),
          static_cast<std::streamsize>(b.size()));
  if (!f) throw state_error("checkpoint write failed: " + path);
}

}  // namespace

void write_checkpoint_range(const tree& t, const std::string& path,
                            std::size_t first, std::size_t count) {
  if (first + count > t.leaf_count())
    throw state_error("checkpoint range out of bounds");
  std::vector<unsigned char> out;
  out.reserve(16 + count * (9 + std::size_t(field_count) * cells_per_leaf * 8));
  out.insert(out.end(), kMagic, kMagic + 4);
  put_u32(out, kVersion);
  put_u64(out, count);
  for (std::size_t i = first; i < first + count; ++i)
    append_leaf(out, t.leaf(i));
  write_file(path, out);
}

void write_checkpoint(const tree& t, const std::string& path) {
  write_checkpoint_range(t, path, 0, t.leaf_count());
}

tree read_checkpoint(const std::string& path, const scenario& sc,
                     int max_level) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw state_error("cannot open checkpoint: " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(f)),
                                   std::istreambuf_iterator<char>());

  reader r{bytes.data(), bytes.data() + bytes.size()};
  r.need(4);
  if (std::memcmp(r.p, kMagic, 4) != 0)
    throw state_error("bad checkpoint magic");
  r.p += 4;
  if (r.u32() != kVersion) throw state_error("unsupported checkpoint version");
  std::uint64_t n = r.u64();

  std::vector<key_t> keys(n);
  std::vector<std::vector<double>> data(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    keys[i] = r.u64();
    int level = r.u8();
    if (level != key_level(keys[i]))
      throw state_error("checkpoint leaf level does not match its key");
    auto& d = data[i];
    d.resize(std::size_t(field_count) * cells_per_leaf);
    for (auto& v : d) v = r.f64();
  }

  tree t = tree::from_leaf_keys(sc, max_level, keys);
  for (std::uint64_t i = 0; i < n; ++i) {
    subgrid& g = t.leaf(t.leaf_index(keys[i]));
    std::size_t k = 0;
    for (int fld = 0; fld < field_count; ++fld)
      for (int z = 1; z <= subgrid_extent; ++z)
        for (int y = 1; y <= subgrid_extent; ++y)
          for (int x = 1; x <= subgrid_extent; ++x)
            g.at(fld, x, y, z) = data[i][k++];
  }
  return t;
}

}  // namespace lanegrid::mesh
