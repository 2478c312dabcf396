#include "dsbu/snapshot_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "dsbu/error.hpp"

namespace dsbu {

namespace {

constexpr char kMagic[4] = {'D', 'S', 'B', 'U'};

template <typename T>
void put(std::vector<unsigned char>& buf, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  buf.insert(buf.end(), bytes, bytes + sizeof(T));
}

template <typename T>
T get(const unsigned char* p) {
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, p, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  T value;
  std::memcpy(&value, bytes, sizeof(T));
  return value;
}

std::uint32_t crc_of(const unsigned char* data, std::size_t size) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large payloads in chunks.
  constexpr std::size_t kChunk = 1u << 30;
  for (std::size_t off = 0; off < size; off += kChunk) {
    crc = crc32(crc, data + off, static_cast<uInt>(std::min(kChunk, size - off)));
  }
  return static_cast<std::uint32_t>(crc);
}

[[noreturn]] void bad(const std::filesystem::path& path, const std::string& msg) {
  throw FormatError(path.string() + ": " + msg);
}

}  // namespace

void write_snapshot(const std::filesystem::path& path, const Field& u, const SnapshotMeta& meta) {
  if (!u.is_physical()) throw UsageError("write_snapshot: field must be physical");
  const Grid2D& g = u.grid();
  std::vector<unsigned char> buf;
  buf.reserve(kSnapshotHeaderBytes + 16 * g.size() + 4);
  buf.insert(buf.end(), kMagic, kMagic + 4);
  put<std::uint32_t>(buf, kSnapshotVersion);
  put<std::uint32_t>(buf, static_cast<std::uint32_t>(g.n()));
  put<double>(buf, g.box_length());
  put<double>(buf, meta.t);
  put<std::int32_t>(buf, meta.nu);
  put<double>(buf, meta.gamma);
  for (const Complex& v : u.values()) {
    put<double>(buf, v.real());
    put<double>(buf, v.imag());
  }
  put<std::uint32_t>(buf, crc_of(buf.data() + kSnapshotHeaderBytes, 16 * g.size()));

  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    out.flush();
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

LoadedSnapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open snapshot " + path.string());
  const std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  if (buf.size() < kSnapshotHeaderBytes) {
    std::ostringstream os;
    os << "truncated file: " << buf.size() << " bytes, header needs " << kSnapshotHeaderBytes;
    bad(path, os.str());
  }
  if (std::memcmp(buf.data(), kMagic, 4) != 0) bad(path, "not a DSBU snapshot (bad magic)");
  const auto version = get<std::uint32_t>(buf.data() + 4);
  if (version != kSnapshotVersion) {
    bad(path, "unsupported snapshot version " + std::to_string(version) + " (expected " +
                  std::to_string(kSnapshotVersion) + ")");
  }
  const auto n = get<std::uint32_t>(buf.data() + 8);
  const auto box = get<double>(buf.data() + 12);
  SnapshotMeta meta;
  meta.t = get<double>(buf.data() + 20);
  meta.nu = get<std::int32_t>(buf.data() + 28);
  meta.gamma = get<double>(buf.data() + 32);

  if (n < 8 || n > (1u << 14) || (n & (n - 1)) != 0) bad(path, "header n = " + std::to_string(n) + " is invalid");
  const std::size_t payload = 16ull * n * n;
  const std::size_t expected = kSnapshotHeaderBytes + payload + 4;
  if (buf.size() != expected) {
    std::ostringstream os;
    os << (buf.size() < expected ? "truncated file" : "trailing bytes") << ": header n = " << n << " implies "
       << expected << " bytes, file has " << buf.size();
    bad(path, os.str());
  }
  if (!(box > 0.0) || !std::isfinite(box)) bad(path, "header box_length is invalid");
  if (!std::isfinite(meta.t)) bad(path, "header t is not finite");
  if (meta.nu != 1 && meta.nu != -1) bad(path, "header nu must be ±1");
  if (!(meta.gamma > 0.0) || !std::isfinite(meta.gamma)) bad(path, "header gamma must be positive");

  const std::uint32_t stored = get<std::uint32_t>(buf.data() + kSnapshotHeaderBytes + payload);
  const std::uint32_t actual = crc_of(buf.data() + kSnapshotHeaderBytes, payload);
  if (stored != actual) {
    std::ostringstream os;
    os << "checksum mismatch in payload bytes [" << kSnapshotHeaderBytes << ", " << kSnapshotHeaderBytes + payload
       << ") (stored " << std::hex << stored << ", computed " << actual << ")";
    bad(path, os.str());
  }

  const Grid2D g(static_cast<int>(n), box);
  std::vector<Complex> values(g.size());
  const unsigned char* p = buf.data() + kSnapshotHeaderBytes;
  for (auto& v : values) {
    v = Complex(get<double>(p), get<double>(p + 8));
    p += 16;
  }
  return {Field(g, std::move(values)), meta};
}

}  // namespace dsbu
