#ifndef CHAMAUTH_BLS12_381_HASH_TO_CURVE_HPP
#define CHAMAUTH_BLS12_381_HASH_TO_CURVE_HPP

#include <string_view>

#include "chamauth/bls12_381/curve.hpp"
#include "chamauth/crypto.hpp"

namespace chamauth::bls12_381 {

/// expand_message_xmd with SHA-256.
inline Bytes expand_message_xmd(ByteView msg, std::string_view dst, std::size_t len) {
    constexpr std::size_t b_bytes = 32;
    constexpr std::size_t block_bytes = 64;
    std::size_t ell = (len + b_bytes - 1) / b_bytes;
    if (ell > 255 || dst.size() > 255 || len > 65535) throw Error(ErrorCode::invalid_argument, "expand_message_xmd: bad length");

    Bytes dst_prime = to_bytes(dst);
    dst_prime.push_back(static_cast<std::uint8_t>(dst.size()));

    Bytes zpad(block_bytes, 0);
    std::array<std::uint8_t, 2> lib{static_cast<std::uint8_t>(len >> 8), static_cast<std::uint8_t>(len)};
    std::array<std::uint8_t, 1> zero{0};
    Digest b0 = Sha256().update(zpad).update(msg).update(lib).update(zero).update(dst_prime).finish();

    Bytes out;
    Digest prev{};
    for (std::size_t i = 1; i <= ell; ++i) {
        Digest in{};
        for (std::size_t k = 0; k < b_bytes; ++k) in[k] = static_cast<std::uint8_t>(b0[k] ^ (i == 1 ? 0 : prev[k]));
        std::array<std::uint8_t, 1> idx{static_cast<std::uint8_t>(i)};
        prev = Sha256().update(i == 1 ? ByteView(b0) : ByteView(in)).update(idx).update(dst_prime).finish();
        append(out, prev);
    }
    out.resize(len);
    return out;
}

namespace detail {

struct SvdwConstants {
    Fp z, c1, c2, c3, c4;
};

// Shallue-van de Woestijne constants for y^2 = x^3 + 4 with Z = -3.
inline const SvdwConstants& svdw_constants() {
    static const SvdwConstants k = [] {
        SvdwConstants s;
        s.z = -Fp::from_u64(3);
        Fp gz = s.z.square() * s.z + G1Curve::b();
        Fp three_z2 = Fp::from_u64(3) * s.z.square();  // 3 Z^2 + 4A with A = 0
        s.c1 = gz;
        s.c2 = -(s.z * Fp::from_u64(2).inverse());
        Fp c3 = *(-(gz * three_z2)).sqrt();
        if (c3.is_odd()) c3 = -c3;
        s.c3 = c3;
        s.c4 = -(Fp::from_u64(4) * gz) * three_z2.inverse();
        return s;
    }();
    return k;
}

inline Fp curve_rhs(const Fp& x) { return x.square() * x + G1Curve::b(); }

}  // namespace detail

/// Maps a field element to a point on E (not yet in the prime-order subgroup).
inline G1Point map_to_curve_svdw(const Fp& u) {
    const auto& k = detail::svdw_constants();
    Fp tv1 = u.square() * k.c1;
    Fp tv2 = Fp::one() + tv1;
    tv1 = Fp::one() - tv1;
    Fp tv3 = (tv1 * tv2).inverse();
    Fp tv4 = u * tv1 * tv3 * k.c3;
    Fp x1 = k.c2 - tv4;
    Fp x2 = k.c2 + tv4;
    Fp x3 = (tv2.square() * tv3).square() * k.c4 + k.z;
    Fp x;
    if (detail::curve_rhs(x1).is_square()) {
        x = x1;
    } else if (detail::curve_rhs(x2).is_square()) {
        x = x2;
    } else {
        x = x3;
    }
    Fp y = *detail::curve_rhs(x).sqrt();
    if (u.is_odd() != y.is_odd()) y = -y;
    return G1Point::from_affine(x, y);
}

/// Effective cofactor for G1 is 1 - z.
inline G1Point clear_cofactor_g1(const G1Point& p) { return p.mul_u64(curve_param_abs + 1); }

/// hash_to_curve (random-oracle variant) into G1. The identity output is
/// re-derived with a 4-byte counter appended to the message.
inline G1Point hash_to_g1(ByteView msg, std::string_view dst) {
    Bytes input(msg.begin(), msg.end());
    for (std::uint32_t counter = 0;; ++counter) {
        if (counter > 0) {
            input.assign(msg.begin(), msg.end());
            append_u32(input, counter);
        }
        Bytes uniform = expand_message_xmd(input, dst, 128);
        Fp u0 = Fp::from_bytes_wide(ByteView(uniform).first(64));
        Fp u1 = Fp::from_bytes_wide(ByteView(uniform).subspan(64));
        G1Point p = clear_cofactor_g1(map_to_curve_svdw(u0) + map_to_curve_svdw(u1));
        if (!p.is_identity()) return p;
    }
}

}  // namespace chamauth::bls12_381

#endif
