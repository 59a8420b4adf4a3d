#ifndef CHAMAUTH_CRYPTO_HPP
#define CHAMAUTH_CRYPTO_HPP

#include <sodium.h>

#include <cstring>
#include <limits>
#include <optional>

#include "chamauth/common.hpp"

namespace chamauth {

namespace detail {
inline void ensure_sodium() {
    static const bool ready = [] {
        if (sodium_init() < 0) throw std::runtime_error("libsodium initialisation failed");
        return true;
    }();
    (void)ready;
}
}  // namespace detail

/// Incremental SHA-256.
class Sha256 {
public:
    Sha256() {
        detail::ensure_sodium();
        crypto_hash_sha256_init(&state_);
    }

    Sha256& update(ByteView data) {
        crypto_hash_sha256_update(&state_, data.data(), data.size());
        return *this;
    }

    Sha256& update(std::string_view s) {
        crypto_hash_sha256_update(&state_, reinterpret_cast<const unsigned char*>(s.data()), s.size());
        return *this;
    }

    Digest finish() {
        Digest out{};
        crypto_hash_sha256_final(&state_, out.data());
        return out;
    }

private:
    crypto_hash_sha256_state state_{};
};

inline Digest sha256(ByteView data) { return Sha256().update(data).finish(); }

inline Digest hmac_sha256(ByteView key, ByteView data) {
    detail::ensure_sodium();
    crypto_auth_hmacsha256_state st;
    crypto_auth_hmacsha256_init(&st, key.data(), key.size());
    crypto_auth_hmacsha256_update(&st, data.data(), data.size());
    Digest out{};
    crypto_auth_hmacsha256_final(&st, out.data());
    return out;
}

/// HKDF-SHA256 (extract then expand).
inline Bytes hkdf_sha256(ByteView ikm, ByteView salt, ByteView info, std::size_t length) {
    if (length > 255 * 32) throw Error(ErrorCode::invalid_argument, "hkdf output too long");
    Digest zero{};
    auto prk = hmac_sha256(salt.empty() ? ByteView(zero) : salt, ikm);
    Bytes out;
    Bytes block;
    for (std::uint8_t counter = 1; out.size() < length; ++counter) {
        Bytes input = block;
        append(input, info);
        input.push_back(counter);
        auto t = hmac_sha256(prk, input);
        block.assign(t.begin(), t.end());
        append(out, block);
    }
    out.resize(length);
    return out;
}

inline bool constant_time_equal(ByteView a, ByteView b) {
    if (a.size() != b.size()) return false;
    detail::ensure_sodium();
    return sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

/// Random byte source. Default-constructed instances draw from the OS CSPRNG;
/// seeded instances expand the seed with SHA-256 in counter mode so runs are
/// reproducible. Satisfies UniformRandomBitGenerator.
class Rng {
public:
    using result_type = std::uint64_t;

    Rng() { detail::ensure_sodium(); }

    static Rng seeded(std::uint64_t seed) {
        Rng r;
        Bytes s;
        append(s, to_bytes("CHAMAUTH-RNG-v1"));
        append_u64(s, seed);
        r.seed_ = sha256(s);
        return r;
    }

    bool deterministic() const { return seed_.has_value(); }

    void fill(std::span<std::uint8_t> out) {
        if (!seed_) {
            randombytes_buf(out.data(), out.size());
            return;
        }
        for (auto& b : out) {
            if (pos_ == buffer_.size()) refill();
            b = buffer_[pos_++];
        }
    }

    Bytes bytes(std::size_t n) {
        Bytes out(n);
        fill(out);
        return out;
    }

    result_type operator()() {
        std::array<std::uint8_t, 8> b{};
        fill(b);
        result_type v = 0;
        for (auto x : b) v = (v << 8) | x;
        return v;
    }

    /// Uniform integer in [0, bound).
    std::uint64_t below(std::uint64_t bound) {
        if (bound == 0) throw Error(ErrorCode::invalid_argument, "empty range");
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
        for (;;) {
            auto v = (*this)();
            if (v < limit) return v % bound;
        }
    }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

private:
    void refill() {
        Bytes in(seed_->begin(), seed_->end());
        append_u64(in, counter_++);
        buffer_ = sha256(in);
        pos_ = 0;
    }

    std::optional<Digest> seed_;
    Digest buffer_{};
    std::size_t pos_ = 32;
    std::uint64_t counter_ = 0;
};

}  // namespace chamauth

#endif
