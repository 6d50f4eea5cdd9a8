#include "countbf/hashing.h"

#include <charconv>
#include <cstring>
#include <stdexcept>
#include <unordered_set>

namespace countbf {

namespace {

inline uint64_t LoadLE64(const unsigned char* p) {
  uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

uint64_t Hash64(std::string_view key, HashSeed seed) {
  constexpr uint64_t m = 0xc6a4a7935bd1e995ULL;
  constexpr int r = 47;

  const auto* data = reinterpret_cast<const unsigned char*>(key.data());
  const size_t len = key.size();
  uint64_t h = seed.value ^ (len * m);

  const size_t blocks = len / 8;
  for (size_t b = 0; b < blocks; ++b) {
    uint64_t k = LoadLE64(data + 8 * b);
    k *= m;
    k ^= k >> r;
    k *= m;
    h ^= k;
    h *= m;
  }

  const unsigned char* tail = data + 8 * blocks;
  switch (len & 7) {
    case 7: h ^= uint64_t{tail[6]} << 48; [[fallthrough]];
    case 6: h ^= uint64_t{tail[5]} << 40; [[fallthrough]];
    case 5: h ^= uint64_t{tail[4]} << 32; [[fallthrough]];
    case 4: h ^= uint64_t{tail[3]} << 24; [[fallthrough]];
    case 3: h ^= uint64_t{tail[2]} << 16; [[fallthrough]];
    case 2: h ^= uint64_t{tail[1]} << 8; [[fallthrough]];
    case 1:
      h ^= uint64_t{tail[0]};
      h *= m;
  }

  h ^= h >> r;
  h *= m;
  h ^= h >> r;
  return Fmix64(h);
}

std::vector<HashSeed> ExpandSeeds(uint64_t master_seed, size_t count) {
  std::vector<HashSeed> seeds;
  seeds.reserve(count);
  std::unordered_set<uint64_t> seen;
  uint64_t state = master_seed;
  while (seeds.size() < count) {
    uint64_t v = SplitMix64(state);
    if (seen.insert(v).second) seeds.push_back(HashSeed{v});
  }
  return seeds;
}

CellIndex DeriveIndices(uint64_t h, uint64_t rows, uint64_t cols,
                        uint32_t counters_per_cell) {
  if (rows == 0 || cols == 0 || counters_per_cell == 0) {
    throw std::invalid_argument("DeriveIndices: zero modulus");
  }
  return CellIndex{h % rows, h % cols,
                   static_cast<uint32_t>(h % counters_per_cell)};
}

std::string FormatGoldenVector(const GoldenVector& v) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(v.key.size() * 2 + 40);
  for (unsigned char c : v.key) {
    out.push_back(kHex[c >> 4]);
    out.push_back(kHex[c & 15]);
  }
  out.push_back('\t');
  out += std::to_string(v.seed.value);
  out.push_back('\t');
  char buf[17];
  for (int i = 0; i < 16; ++i) buf[i] = kHex[(v.hash >> (60 - 4 * i)) & 15];
  buf[16] = '\0';
  out += buf;
  return out;
}

GoldenVector ParseGoldenVector(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  const size_t t1 = line.find('\t');
  const size_t t2 = t1 == std::string_view::npos ? t1 : line.find('\t', t1 + 1);
  if (t2 == std::string_view::npos) {
    throw std::invalid_argument("golden vector: expected three tab-separated fields");
  }
  const std::string_view hex_key = line.substr(0, t1);
  const std::string_view seed_str = line.substr(t1 + 1, t2 - t1 - 1);
  const std::string_view hash_str = line.substr(t2 + 1);
  if (hex_key.size() % 2 != 0) {
    throw std::invalid_argument("golden vector: odd-length hex key");
  }

  GoldenVector v;
  for (size_t i = 0; i < hex_key.size(); i += 2) {
    const int hi = HexValue(hex_key[i]);
    const int lo = HexValue(hex_key[i + 1]);
    if (hi < 0 || lo < 0) throw std::invalid_argument("golden vector: bad hex key");
    v.key.push_back(static_cast<char>(hi * 16 + lo));
  }
  auto parse = [](std::string_view s, int base, uint64_t& out) {
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out, base);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw std::invalid_argument("golden vector: bad number '" + std::string(s) + "'");
    }
  };
  parse(seed_str, 10, v.seed.value);
  parse(hash_str, 16, v.hash);
  return v;
}

}  // namespace countbf
