#ifndef CHAMAUTH_BLS12_381_FIELD_HPP
#define CHAMAUTH_BLS12_381_FIELD_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace chamauth::bls12_381 {

template <std::size_t N>
using Limbs = std::array<std::uint64_t, N>;

using u128 = unsigned __int128;

/// Little-endian limbs from a big-endian hex literal (no 0x prefix).
template <std::size_t N>
constexpr Limbs<N> limbs_from_hex(std::string_view hex) {
    Limbs<N> out{};
    std::size_t bit = 0;
    for (std::size_t i = hex.size(); i-- > 0;) {
        char c = hex[i];
        std::uint64_t v = (c >= '0' && c <= '9') ? std::uint64_t(c - '0')
                          : (c >= 'a' && c <= 'f') ? std::uint64_t(c - 'a' + 10)
                                                   : std::uint64_t(c - 'A' + 10);
        out[bit / 64] |= v << (bit % 64);
        bit += 4;
    }
    return out;
}

template <std::size_t N>
constexpr bool limbs_geq(const Limbs<N>& a, const Limbs<N>& b) {
    for (std::size_t i = N; i-- > 0;) {
        if (a[i] != b[i]) return a[i] > b[i];
    }
    return true;
}

template <std::size_t N>
constexpr std::uint64_t limbs_add(Limbs<N>& a, const Limbs<N>& b) {
    std::uint64_t carry = 0;
    for (std::size_t i = 0; i < N; ++i) {
        u128 s = u128(a[i]) + b[i] + carry;
        a[i] = static_cast<std::uint64_t>(s);
        carry = static_cast<std::uint64_t>(s >> 64);
    }
    return carry;
}

template <std::size_t N>
constexpr std::uint64_t limbs_sub(Limbs<N>& a, const Limbs<N>& b) {
    std::uint64_t borrow = 0;
    for (std::size_t i = 0; i < N; ++i) {
        u128 d = u128(a[i]) - b[i] - borrow;
        a[i] = static_cast<std::uint64_t>(d);
        borrow = static_cast<std::uint64_t>(d >> 64) & 1;
    }
    return borrow;
}

template <std::size_t N>
constexpr bool limbs_bit(const Limbs<N>& a, std::size_t i) {
    return (a[i / 64] >> (i % 64)) & 1;
}

template <std::size_t N>
constexpr std::size_t limbs_bit_length(const Limbs<N>& a) {
    for (std::size_t i = N; i-- > 0;) {
        if (a[i] != 0) return i * 64 + (64 - static_cast<std::size_t>(__builtin_clzll(a[i])));
    }
    return 0;
}

template <std::size_t N>
constexpr bool limbs_is_zero(const Limbs<N>& a) {
    for (auto x : a)
        if (x != 0) return false;
    return true;
}

/// Prime field in Montgomery representation. Cfg supplies `limbs`, `bytes`
/// (canonical encoding width) and `modulus`; the modulus must leave the top
/// bit of the last limb clear.
template <class Cfg>
class MontField {
public:
    static constexpr std::size_t N = Cfg::limbs;
    static constexpr std::size_t byte_size = Cfg::bytes;
    using limbs_type = Limbs<N>;
    static constexpr limbs_type modulus = Cfg::modulus;

private:
    static constexpr std::uint64_t compute_inv() {
        std::uint64_t inv = 1;
        for (int i = 0; i < 63; ++i) {
            inv *= inv;
            inv *= modulus[0];
        }
        return ~inv + 1;
    }

    static constexpr limbs_type double_mod(limbs_type a) {
        std::uint64_t carry = a[N - 1] >> 63;
        for (std::size_t i = N; i-- > 1;) a[i] = (a[i] << 1) | (a[i - 1] >> 63);
        a[0] <<= 1;
        if (carry || limbs_geq(a, modulus)) limbs_sub(a, modulus);
        return a;
    }

    static constexpr limbs_type power_of_two_mod(std::size_t k) {
        limbs_type a{};
        a[0] = 1;
        for (std::size_t i = 0; i < k; ++i) a = double_mod(a);
        return a;
    }

public:
    static constexpr std::uint64_t m_inv = compute_inv();
    static constexpr limbs_type r1 = power_of_two_mod(64 * N);
    static constexpr limbs_type r2 = power_of_two_mod(128 * N);

    constexpr MontField() = default;

    static constexpr MontField zero() { return MontField(); }
    static constexpr MontField one() { return from_mont(r1); }

    static constexpr MontField from_mont(const limbs_type& m) {
        MontField f;
        f.v_ = m;
        return f;
    }

    /// `value` must already be reduced.
    static constexpr MontField from_canonical(const limbs_type& value) { return from_mont(value) * from_mont(r2); }

    static constexpr MontField from_u64(std::uint64_t x) {
        limbs_type l{};
        l[0] = x;
        reduce_once(l);
        return from_canonical(l);
    }

    /// Reduces an arbitrary-length big-endian integer mod the modulus.
    static MontField from_bytes_wide(std::span<const std::uint8_t> be) {
        const MontField radix = from_mont(r2);  // 2^(64N) mod p
        MontField acc;
        std::size_t chunk = 8 * N;
        std::size_t first = be.size() % chunk;
        std::size_t pos = 0;
        auto take = [&](std::size_t len) {
            limbs_type l{};
            for (std::size_t i = 0; i < len; ++i) {
                std::size_t bitpos = 8 * (len - 1 - i);
                l[bitpos / 64] |= std::uint64_t(be[pos + i]) << (bitpos % 64);
            }
            pos += len;
            while (limbs_geq(l, modulus)) limbs_sub(l, modulus);
            return from_canonical(l);
        };
        if (first) acc = take(first);
        while (pos < be.size()) acc = acc * radix + take(chunk);
        return acc;
    }

    /// Canonical big-endian decoding; rejects values >= modulus.
    static std::optional<MontField> from_bytes(std::span<const std::uint8_t> be) {
        if (be.size() != byte_size) return std::nullopt;
        limbs_type l{};
        for (std::size_t i = 0; i < byte_size; ++i) {
            std::size_t bitpos = 8 * (byte_size - 1 - i);
            l[bitpos / 64] |= std::uint64_t(be[i]) << (bitpos % 64);
        }
        if (limbs_geq(l, modulus)) return std::nullopt;
        return from_canonical(l);
    }

    void to_bytes(std::span<std::uint8_t> out) const {
        auto l = to_canonical();
        for (std::size_t i = 0; i < byte_size; ++i) {
            std::size_t bitpos = 8 * (byte_size - 1 - i);
            out[i] = static_cast<std::uint8_t>(l[bitpos / 64] >> (bitpos % 64));
        }
    }

    std::array<std::uint8_t, byte_size> to_bytes() const {
        std::array<std::uint8_t, byte_size> out{};
        to_bytes(out);
        return out;
    }

    constexpr limbs_type to_canonical() const {
        limbs_type one{};
        one[0] = 1;
        return mont_mul(v_, one);
    }

    constexpr const limbs_type& mont() const { return v_; }

    constexpr bool is_zero() const { return limbs_is_zero(v_); }
    constexpr bool is_one() const { return v_ == r1; }
    /// Parity of the canonical value (sgn0 for prime fields).
    constexpr bool is_odd() const { return to_canonical()[0] & 1; }

    friend constexpr bool operator==(const MontField& a, const MontField& b) { return a.v_ == b.v_; }

    friend constexpr MontField operator+(MontField a, const MontField& b) {
        std::uint64_t carry = limbs_add(a.v_, b.v_);
        if (carry || limbs_geq(a.v_, modulus)) limbs_sub(a.v_, modulus);
        return a;
    }

    friend constexpr MontField operator-(MontField a, const MontField& b) {
        if (limbs_sub(a.v_, b.v_)) limbs_add(a.v_, modulus);
        return a;
    }

    constexpr MontField operator-() const { return MontField() - *this; }

    friend constexpr MontField operator*(const MontField& a, const MontField& b) { return from_mont(mont_mul(a.v_, b.v_)); }

    MontField& operator+=(const MontField& o) { return *this = *this + o; }
    MontField& operator-=(const MontField& o) { return *this = *this - o; }
    MontField& operator*=(const MontField& o) { return *this = *this * o; }

    constexpr MontField square() const { return *this * *this; }
    constexpr MontField dbl() const { return *this + *this; }

    template <std::size_t M>
    constexpr MontField pow(const Limbs<M>& e) const {
        MontField acc = one();
        for (std::size_t i = limbs_bit_length(e); i-- > 0;) {
            acc = acc.square();
            if (limbs_bit(e, i)) acc = acc * *this;
        }
        return acc;
    }

    /// Multiplicative inverse; zero maps to zero.
    constexpr MontField inverse() const {
        limbs_type e = modulus;
        limbs_type two{};
        two[0] = 2;
        limbs_sub(e, two);
        return pow(e);
    }

    /// Euler's criterion; zero counts as a square.
    bool is_square() const {
        if (is_zero()) return true;
        static const limbs_type e = [] {
            limbs_type t = modulus;
            limbs_type one{};
            one[0] = 1;
            limbs_sub(t, one);
            for (std::size_t i = 0; i < N; ++i) t[i] = (t[i] >> 1) | (i + 1 < N ? t[i + 1] << 63 : 0);
            return t;
        }();
        return pow(e).is_one();
    }

    /// Square root for moduli congruent to 3 mod 4.
    std::optional<MontField> sqrt() const {
        static_assert(Cfg::modulus[0] % 4 == 3, "sqrt requires p = 3 mod 4");
        static const limbs_type e = [] {
            limbs_type t = modulus;
            limbs_type one{};
            one[0] = 1;
            limbs_add(t, one);
            for (std::size_t i = 0; i < N; ++i) t[i] = (t[i] >> 2) | (i + 1 < N ? t[i + 1] << 62 : 0);
            return t;
        }();
        MontField r = pow(e);
        if (r.square() == *this) return r;
        return std::nullopt;
    }

private:
    static constexpr void reduce_once(limbs_type& a) {
        if (limbs_geq(a, modulus)) limbs_sub(a, modulus);
    }

    // Coarsely integrated operand scanning Montgomery multiplication.
    static constexpr limbs_type mont_mul(const limbs_type& a, const limbs_type& b) {
        std::uint64_t t[N + 1] = {};
#pragma GCC unroll 8
        for (std::size_t i = 0; i < N; ++i) {
            std::uint64_t carry = 0;
#pragma GCC unroll 8
            for (std::size_t j = 0; j < N; ++j) {
                u128 s = u128(a[j]) * b[i] + t[j] + carry;
                t[j] = static_cast<std::uint64_t>(s);
                carry = static_cast<std::uint64_t>(s >> 64);
            }
            u128 top = u128(t[N]) + carry;
            std::uint64_t m = t[0] * m_inv;
            u128 s = u128(m) * modulus[0] + t[0];
            carry = static_cast<std::uint64_t>(s >> 64);
#pragma GCC unroll 8
            for (std::size_t j = 1; j < N; ++j) {
                s = u128(m) * modulus[j] + t[j] + carry;
                t[j - 1] = static_cast<std::uint64_t>(s);
                carry = static_cast<std::uint64_t>(s >> 64);
            }
            top += carry;
            t[N - 1] = static_cast<std::uint64_t>(top);
            t[N] = static_cast<std::uint64_t>(top >> 64);
        }
        // t < 2p; subtract p once if needed.
        limbs_type out{};
        limbs_type diff{};
        std::uint64_t borrow = 0;
#pragma GCC unroll 8
        for (std::size_t i = 0; i < N; ++i) {
            out[i] = t[i];
            u128 d = u128(t[i]) - modulus[i] - borrow;
            diff[i] = static_cast<std::uint64_t>(d);
            borrow = static_cast<std::uint64_t>(d >> 64) & 1;
        }
        return (t[N] || !borrow) ? diff : out;
    }

    limbs_type v_{};
};

struct FpConfig {
    static constexpr std::size_t limbs = 6;
    static constexpr std::size_t bytes = 48;
    static constexpr Limbs<6> modulus = limbs_from_hex<6>(
        "1a0111ea397fe69a4b1ba7b6434bacd764774b84f38512bf6730d2a0f6b0f6241eabfffeb153ffffb9feffffffffaaab");
};

struct FrConfig {
    static constexpr std::size_t limbs = 4;
    static constexpr std::size_t bytes = 32;
    static constexpr Limbs<4> modulus =
        limbs_from_hex<4>("73eda753299d7d483339d80809a1d80553bda402fffe5bfeffffffff00000001");
};

/// Base field of BLS12-381.
using Fp = MontField<FpConfig>;
/// Scalar field (prime group order r).
using Fr = MontField<FrConfig>;

/// |z| for the curve parameter z = -0xd201000000010000.
inline constexpr std::uint64_t curve_param_abs = 0xd201000000010000ULL;

}  // namespace chamauth::bls12_381

#endif
