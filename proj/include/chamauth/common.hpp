#ifndef CHAMAUTH_COMMON_HPP
#define CHAMAUTH_COMMON_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace chamauth {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;
using Digest = std::array<std::uint8_t, 32>;

enum class ErrorCode {
    unsupported_level,
    invalid_argument,
    invalid_encoding,
    degenerate_base,
    invalid_key,
    duplicate_identity,
    unknown_entry,
    watermark_state,
    length_mismatch,
    phase_violation,
    timeout,
    io,
};

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

inline Bytes to_bytes(std::string_view s) { return Bytes(s.begin(), s.end()); }

inline std::string to_hex(ByteView data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0x0f]);
    }
    return out;
}

inline Bytes from_hex(std::string_view hex) {
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9') return c - '0';
        if (c >= 'a' && c <= 'f') return c - 'a' + 10;
        if (c >= 'A' && c <= 'F') return c - 'A' + 10;
        return -1;
    };
    if (hex.size() % 2 != 0) throw Error(ErrorCode::invalid_encoding, "odd-length hex string");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = nibble(hex[2 * i]);
        int lo = nibble(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw Error(ErrorCode::invalid_encoding, "invalid hex digit");
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return out;
}

inline void append(Bytes& out, ByteView data) { out.insert(out.end(), data.begin(), data.end()); }

inline void append_u32(Bytes& out, std::uint32_t v) {
    for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void append_u64(Bytes& out, std::uint64_t v) {
    for (int shift = 56; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

inline void append_field(Bytes& out, ByteView data) {
    append_u32(out, static_cast<std::uint32_t>(data.size()));
    append(out, data);
}

/// Sequential reader over a byte buffer; every short read throws invalid_encoding.
class ByteReader {
public:
    explicit ByteReader(ByteView data) : data_(data) {}

    ByteView take(std::size_t n) {
        if (remaining() < n) throw Error(ErrorCode::invalid_encoding, "truncated input");
        auto out = data_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::uint8_t u8() { return take(1)[0]; }

    std::uint32_t u32() {
        auto b = take(4);
        return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) | (std::uint32_t{b[2]} << 8) | b[3];
    }

    std::uint64_t u64() {
        auto b = take(8);
        std::uint64_t v = 0;
        for (auto x : b) v = (v << 8) | x;
        return v;
    }

    Bytes field() {
        auto n = u32();
        auto b = take(n);
        return Bytes(b.begin(), b.end());
    }

    std::size_t remaining() const { return data_.size() - pos_; }
    bool done() const { return remaining() == 0; }

    void expect_done() const {
        if (!done()) throw Error(ErrorCode::invalid_encoding, "trailing bytes");
    }

private:
    ByteView data_;
    std::size_t pos_ = 0;
};

}  // namespace chamauth

#endif
