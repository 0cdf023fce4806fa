#pragma once

#include <cstdint>
#include <string>

namespace qcg::bytes {

inline void put_u8(std::string& s, std::uint8_t v) { s.push_back(static_cast<char>(v)); }

inline void put_u16(std::string& s, std::uint16_t v) {
    s.push_back(static_cast<char>(v >> 8));
    s.push_back(static_cast<char>(v & 0xff));
}

inline void put_u32(std::string& s, std::uint32_t v) {
    for (int sh = 24; sh >= 0; sh -= 8) s.push_back(static_cast<char>((v >> sh) & 0xff));
}

inline void put_u64(std::string& s, std::uint64_t v) {
    for (int sh = 56; sh >= 0; sh -= 8) s.push_back(static_cast<char>((v >> sh) & 0xff));
}

inline void put_blob(std::string& s, const std::string& b) {
    put_u32(s, static_cast<std::uint32_t>(b.size()));
    s += b;
}

inline std::uint8_t u8(const std::string& s, std::size_t at) {
    return static_cast<std::uint8_t>(s[at]);
}

inline std::uint16_t u16(const std::string& s, std::size_t at) {
    return static_cast<std::uint16_t>((u8(s, at) << 8) | u8(s, at + 1));
}

inline std::uint32_t u32(const std::string& s, std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | u8(s, at + i);
    return v;
}

inline std::uint64_t u64(const std::string& s, std::size_t at) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | u8(s, at + i);
    return v;
}

}  // namespace qcg::bytes
