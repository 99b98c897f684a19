#pragma once

#include <cstdint>
#include <cstdio>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace axrv {

struct IhexImage {
  std::vector<uint8_t> bytes;
  uint32_t base = 0;
};

namespace detail {

inline int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

inline uint8_t hex_byte(std::string_view s, size_t pos) {
  const int hi = hex_nibble(s[pos]);
  const int lo = hex_nibble(s[pos + 1]);
  if (hi < 0 || lo < 0) throw std::invalid_argument("ihex: non-hex digit in record");
  return uint8_t(hi << 4 | lo);
}

}  // namespace detail

/// Parse Intel HEX text. Only record types 00 (data) and 01 (end-of-file)
/// are accepted; checksums are verified. Gaps between records are
/// zero-filled; `base` is the lowest address seen.
inline IhexImage ihex_parse(std::string_view text) {
  std::map<uint32_t, uint8_t> sparse;
  bool saw_eof = false;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.remove_suffix(1);
    while (!line.empty() && line.front() == ' ') line.remove_prefix(1);
    if (line.empty()) continue;
    if (saw_eof) throw std::invalid_argument("ihex: data after end-of-file record");
    if (line.front() != ':') throw std::invalid_argument("ihex: record must start with ':'");
    if (line.size() < 11 || (line.size() - 1) % 2 != 0)
      throw std::invalid_argument("ihex: truncated record");
    const uint8_t count = detail::hex_byte(line, 1);
    if (line.size() != size_t(11 + 2 * count)) throw std::invalid_argument("ihex: length mismatch");
    const uint32_t addr = uint32_t(detail::hex_byte(line, 3)) << 8 | detail::hex_byte(line, 5);
    const uint8_t type = detail::hex_byte(line, 7);
    uint8_t sum = uint8_t(count + (addr >> 8) + (addr & 0xFF) + type);
    std::vector<uint8_t> data(count);
    for (unsigned i = 0; i < count; ++i) {
      data[i] = detail::hex_byte(line, 9 + 2 * i);
      sum = uint8_t(sum + data[i]);
    }
    const uint8_t checksum = detail::hex_byte(line, 9 + 2 * count);
    if (uint8_t(sum + checksum) != 0) throw std::invalid_argument("ihex: checksum mismatch");
    switch (type) {
      case 0x00:
        for (unsigned i = 0; i < count; ++i) sparse[addr + i] = data[i];
        break;
      case 0x01:
        saw_eof = true;
        break;
      default:
        throw std::invalid_argument("ihex: unsupported record type (only 00/01)");
    }
  }
  if (!saw_eof) throw std::invalid_argument("ihex: missing end-of-file record");
  IhexImage image;
  if (sparse.empty()) return image;
  image.base = sparse.begin()->first;
  const uint32_t end = sparse.rbegin()->first + 1;
  image.bytes.assign(end - image.base, 0);
  for (const auto& [a, v] : sparse) image.bytes[a - image.base] = v;
  return image;
}

/// Emit Intel HEX (16-byte data records plus the EOF record). Addresses
/// must fit the 16-bit record address field.
inline std::string ihex_emit(std::span<const uint8_t> bytes, uint32_t base = 0) {
  if (base + bytes.size() > 0x10000)
    throw std::invalid_argument("ihex: image does not fit 16-bit record addresses");
  std::string out;
  char buf[16];
  for (size_t off = 0; off < bytes.size(); off += 16) {
    const size_t n = std::min<size_t>(16, bytes.size() - off);
    const uint32_t addr = base + uint32_t(off);
    std::snprintf(buf, sizeof(buf), ":%02zX%04X00", n, addr);
    out += buf;
    uint8_t sum = uint8_t(n + (addr >> 8) + (addr & 0xFF));
    for (size_t i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%02X", bytes[off + i]);
      out += buf;
      sum = uint8_t(sum + bytes[off + i]);
    }
    std::snprintf(buf, sizeof(buf), "%02X\n", uint8_t(0x100 - sum));
    out += buf;
  }
  out += ":00000001FF\n";
  return out;
}

}  // namespace axrv
