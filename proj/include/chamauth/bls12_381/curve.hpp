#ifndef CHAMAUTH_BLS12_381_CURVE_HPP
#define CHAMAUTH_BLS12_381_CURVE_HPP

#include <optional>
#include <span>
#include <utility>

#include "chamauth/bls12_381/tower.hpp"

namespace chamauth::bls12_381 {

/// Short Weierstrass point y^2 = x^3 + b in Jacobian coordinates
/// (x = X/Z^2, y = Y/Z^3). Z = 0 encodes the point at infinity.
template <class F, class Curve>
struct JacobianPoint {
    F x = F::one();
    F y = F::one();
    F z = F::zero();

    static JacobianPoint identity() { return {}; }
    static JacobianPoint from_affine(const F& ax, const F& ay) { return {ax, ay, F::one()}; }
    static JacobianPoint generator() { return Curve::generator(); }

    bool is_identity() const { return z.is_zero(); }

    bool is_on_curve() const {
        if (is_identity()) return true;
        F z2 = z.square();
        F z6 = z2.square() * z2;
        return y.square() == x.square() * x + Curve::b() * z6;
    }

    JacobianPoint dbl() const {
        if (is_identity()) return *this;
        F a = x.square();
        F b = y.square();
        F c = b.square();
        F d = ((x + b).square() - a - c).dbl();
        F e = a.dbl() + a;
        F f = e.square();
        JacobianPoint r;
        r.x = f - d.dbl();
        r.y = e * (d - r.x) - c.dbl().dbl().dbl();
        r.z = (y * z).dbl();
        return r;
    }

    friend JacobianPoint operator+(const JacobianPoint& p, const JacobianPoint& q) {
        if (p.is_identity()) return q;
        if (q.is_identity()) return p;
        F z1z1 = p.z.square();
        F z2z2 = q.z.square();
        F u1 = p.x * z2z2;
        F u2 = q.x * z1z1;
        F s1 = p.y * q.z * z2z2;
        F s2 = q.y * p.z * z1z1;
        F h = u2 - u1;
        F rr = (s2 - s1).dbl();
        if (h.is_zero()) {
            if (rr.is_zero()) return p.dbl();
            return identity();
        }
        F i = h.dbl().square();
        F j = h * i;
        F v = u1 * i;
        JacobianPoint r;
        r.x = rr.square() - j - v.dbl();
        r.y = rr * (v - r.x) - (s1 * j).dbl();
        r.z = ((p.z + q.z).square() - z1z1 - z2z2) * h;
        return r;
    }

    JacobianPoint operator-() const { return {x, -y, z}; }
    friend JacobianPoint operator-(const JacobianPoint& p, const JacobianPoint& q) { return p + (-q); }

    friend bool operator==(const JacobianPoint& p, const JacobianPoint& q) {
        if (p.is_identity() || q.is_identity()) return p.is_identity() && q.is_identity();
        F z1z1 = p.z.square();
        F z2z2 = q.z.square();
        if (!(p.x * z2z2 == q.x * z1z1)) return false;
        return p.y * q.z * z2z2 == q.y * p.z * z1z1;
    }

    template <std::size_t M>
    JacobianPoint mul(const Limbs<M>& k) const {
        JacobianPoint acc;
        for (std::size_t i = limbs_bit_length(k); i-- > 0;) {
            acc = acc.dbl();
            if (limbs_bit(k, i)) acc = acc + *this;
        }
        return acc;
    }

    JacobianPoint mul(const Fr& k) const { return mul(k.to_canonical()); }

    JacobianPoint mul_u64(std::uint64_t k) const {
        Limbs<1> l{k};
        return mul(l);
    }

    /// Affine coordinates; the point must not be the identity.
    std::pair<F, F> to_affine() const {
        F zi = z.inverse();
        F zi2 = zi.square();
        return {x * zi2, y * zi2 * zi};
    }

    /// Prime-order subgroup membership (multiplication by r).
    bool in_subgroup() const { return mul(Fr::modulus).is_identity(); }
};

struct G1Curve;
struct G2Curve;
using G1Point = JacobianPoint<Fp, G1Curve>;
using G2Point = JacobianPoint<Fp2, G2Curve>;

struct G1Curve {
    static Fp b() {
        static const Fp v = Fp::from_u64(4);
        return v;
    }

    static G1Point generator() {
        static const G1Point g = G1Point::from_affine(
            Fp::from_canonical(limbs_from_hex<6>("17f1d3a73197d7942695638c4fa9ac0fc3688c4f9774b905a14e3a3f171bac586c55e83ff97a1aeffb3af00adb22c6bb")),
            Fp::from_canonical(limbs_from_hex<6>("08b3f481e3aaa0f1a09e30ed741d8ae4fcf5e095d5d00af600db18cb2c04b3edd03cc744a2888ae40caa232946c5e7e1")));
        return g;
    }
};

struct G2Curve {
    static Fp2 b() {
        static const Fp2 v{Fp::from_u64(4), Fp::from_u64(4)};
        return v;
    }

    static G2Point generator() {
        static const G2Point g = G2Point::from_affine(
            Fp2{Fp::from_canonical(limbs_from_hex<6>("024aa2b2f08f0a91260805272dc51051c6e47ad4fa403b02b4510b647ae3d1770bac0326a805bbefd48056c8c121bdb8")),
                Fp::from_canonical(limbs_from_hex<6>("13e02b6052719f607dacd3a088274f65596bd0d09920b61ab5da61bbdc7f5049334cf11213945d57e5ac7d055d042b7e"))},
            Fp2{Fp::from_canonical(limbs_from_hex<6>("0ce5d527727d6e118cc9cdc6da2e351aadfd9baa8cbdd3a76d429a695160d12c923ac9cc3baca289e193548608b82801")),
                Fp::from_canonical(limbs_from_hex<6>("0606c4a02ea734cc32acd2b02bc28b99cb3e287e85a763af267492ab572e99ab3f370d275cec1da1aaa9075ff05f79be"))});
        return g;
    }
};

// Compressed encodings: big-endian x with the three top bits of the first
// byte as flags (compressed, infinity, y is the lexicographically larger root).
inline constexpr std::size_t g1_compressed_size = 48;
inline constexpr std::size_t g2_compressed_size = 96;

namespace detail {
inline constexpr std::uint8_t flag_compressed = 0x80;
inline constexpr std::uint8_t flag_infinity = 0x40;
inline constexpr std::uint8_t flag_sort = 0x20;
}  // namespace detail

inline std::array<std::uint8_t, g1_compressed_size> encode_g1(const G1Point& p) {
    std::array<std::uint8_t, g1_compressed_size> out{};
    if (p.is_identity()) {
        out[0] = detail::flag_compressed | detail::flag_infinity;
        return out;
    }
    auto [x, y] = p.to_affine();
    x.to_bytes(out);
    out[0] |= detail::flag_compressed;
    if (fp_lexicographically_largest(y)) out[0] |= detail::flag_sort;
    return out;
}

inline std::optional<G1Point> decode_g1(std::span<const std::uint8_t> in) {
    if (in.size() != g1_compressed_size) return std::nullopt;
    std::uint8_t flags = in[0] & 0xe0;
    if (!(flags & detail::flag_compressed)) return std::nullopt;
    std::array<std::uint8_t, g1_compressed_size> xb{};
    std::copy(in.begin(), in.end(), xb.begin());
    xb[0] &= 0x1f;
    if (flags & detail::flag_infinity) {
        if (flags & detail::flag_sort) return std::nullopt;
        for (auto b : xb)
            if (b) return std::nullopt;
        return G1Point::identity();
    }
    auto x = Fp::from_bytes(xb);
    if (!x) return std::nullopt;
    auto y = (x->square() * *x + G1Curve::b()).sqrt();
    if (!y) return std::nullopt;
    if (fp_lexicographically_largest(*y) != bool(flags & detail::flag_sort)) *y = -*y;
    auto p = G1Point::from_affine(*x, *y);
    if (!p.in_subgroup()) return std::nullopt;
    return p;
}

inline std::array<std::uint8_t, g2_compressed_size> encode_g2(const G2Point& p) {
    std::array<std::uint8_t, g2_compressed_size> out{};
    if (p.is_identity()) {
        out[0] = detail::flag_compressed | detail::flag_infinity;
        return out;
    }
    auto [x, y] = p.to_affine();
    x.c1.to_bytes(std::span(out).first(48));
    x.c0.to_bytes(std::span(out).subspan(48));
    out[0] |= detail::flag_compressed;
    if (y.lexicographically_largest()) out[0] |= detail::flag_sort;
    return out;
}

inline std::optional<G2Point> decode_g2(std::span<const std::uint8_t> in) {
    if (in.size() != g2_compressed_size) return std::nullopt;
    std::uint8_t flags = in[0] & 0xe0;
    if (!(flags & detail::flag_compressed)) return std::nullopt;
    std::array<std::uint8_t, g2_compressed_size> xb{};
    std::copy(in.begin(), in.end(), xb.begin());
    xb[0] &= 0x1f;
    if (flags & detail::flag_infinity) {
        if (flags & detail::flag_sort) return std::nullopt;
        for (auto b : xb)
            if (b) return std::nullopt;
        return G2Point::identity();
    }
    auto c1 = Fp::from_bytes(std::span(xb).first(48));
    auto c0 = Fp::from_bytes(std::span(xb).subspan(48));
    if (!c0 || !c1) return std::nullopt;
    Fp2 x{*c0, *c1};
    auto y = (x.square() * x + G2Curve::b()).sqrt();
    if (!y) return std::nullopt;
    if (y->lexicographically_largest() != bool(flags & detail::flag_sort)) *y = -*y;
    auto p = G2Point::from_affine(x, *y);
    if (!p.in_subgroup()) return std::nullopt;
    return p;
}

}  // namespace chamauth::bls12_381

#endif
