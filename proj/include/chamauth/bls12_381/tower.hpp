#ifndef CHAMAUTH_BLS12_381_TOWER_HPP
#define CHAMAUTH_BLS12_381_TOWER_HPP

#include <optional>

#include "chamauth/bls12_381/field.hpp"

// Extension tower:
//   Fp2  = Fp[u]  / (u^2 + 1)
//   Fp6  = Fp2[v] / (v^3 - xi),  xi = u + 1
//   Fp12 = Fp6[w] / (w^2 - v)

namespace chamauth::bls12_381 {

struct Fp2 {
    Fp c0, c1;

    static Fp2 zero() { return {}; }
    static Fp2 one() { return {Fp::one(), Fp::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero(); }
    friend bool operator==(const Fp2&, const Fp2&) = default;

    friend Fp2 operator+(const Fp2& a, const Fp2& b) { return {a.c0 + b.c0, a.c1 + b.c1}; }
    friend Fp2 operator-(const Fp2& a, const Fp2& b) { return {a.c0 - b.c0, a.c1 - b.c1}; }
    Fp2 operator-() const { return {-c0, -c1}; }

    friend Fp2 operator*(const Fp2& a, const Fp2& b) {
        Fp t0 = a.c0 * b.c0;
        Fp t1 = a.c1 * b.c1;
        Fp t2 = (a.c0 + a.c1) * (b.c0 + b.c1);
        return {t0 - t1, t2 - t0 - t1};
    }

    friend Fp2 operator*(const Fp2& a, const Fp& s) { return {a.c0 * s, a.c1 * s}; }

    Fp2& operator+=(const Fp2& o) { return *this = *this + o; }
    Fp2& operator-=(const Fp2& o) { return *this = *this - o; }
    Fp2& operator*=(const Fp2& o) { return *this = *this * o; }

    Fp2 square() const {
        Fp a = (c0 + c1) * (c0 - c1);
        Fp b = c0 * c1;
        return {a, b + b};
    }

    Fp2 dbl() const { return {c0.dbl(), c1.dbl()}; }
    Fp2 conjugate() const { return {c0, -c1}; }
    Fp2 mul_by_xi() const { return {c0 - c1, c0 + c1}; }

    Fp2 inverse() const {
        Fp t = (c0.square() + c1.square()).inverse();
        return {c0 * t, -(c1 * t)};
    }

    template <std::size_t M>
    Fp2 pow(const Limbs<M>& e) const {
        Fp2 acc = one();
        for (std::size_t i = limbs_bit_length(e); i-- > 0;) {
            acc = acc.square();
            if (limbs_bit(e, i)) acc = acc * *this;
        }
        return acc;
    }

    /// sgn0 for quadratic extensions.
    bool sgn0() const {
        bool sign0 = c0.is_odd();
        bool zero0 = c0.is_zero();
        bool sign1 = c1.is_odd();
        return sign0 || (zero0 && sign1);
    }

    /// Lexicographic "larger half" flag used by compressed encodings.
    bool lexicographically_largest() const;

    /// Square root for p = 3 mod 4 quadratic extensions.
    std::optional<Fp2> sqrt() const {
        if (is_zero()) return Fp2{};
        static const auto exps = [] {
            Limbs<6> p34 = Fp::modulus;  // (p - 3) / 4
            Limbs<6> three{};
            three[0] = 3;
            limbs_sub(p34, three);
            for (std::size_t i = 0; i < 6; ++i) p34[i] = (p34[i] >> 2) | (i + 1 < 6 ? p34[i + 1] << 62 : 0);
            Limbs<6> p12 = Fp::modulus;  // (p - 1) / 2
            Limbs<6> one{};
            one[0] = 1;
            limbs_sub(p12, one);
            for (std::size_t i = 0; i < 6; ++i) p12[i] = (p12[i] >> 1) | (i + 1 < 6 ? p12[i + 1] << 63 : 0);
            return std::pair{p34, p12};
        }();
        Fp2 a1 = pow(exps.first);
        Fp2 alpha = a1.square() * *this;
        Fp2 x0 = a1 * *this;
        Fp2 minus_one = -one();
        Fp2 candidate;
        if (alpha == minus_one) {
            candidate = Fp2{-x0.c1, x0.c0};  // u * x0
        } else {
            Fp2 b = (one() + alpha).pow(exps.second);
            candidate = b * x0;
        }
        if (candidate.square() == *this) return candidate;
        return std::nullopt;
    }
};

inline bool fp_lexicographically_largest(const Fp& a) {
    // a > (p - 1) / 2
    static const Limbs<6> half = [] {
        Limbs<6> t = Fp::modulus;
        Limbs<6> one{};
        one[0] = 1;
        limbs_sub(t, one);
        for (std::size_t i = 0; i < 6; ++i) t[i] = (t[i] >> 1) | (i + 1 < 6 ? t[i + 1] << 63 : 0);
        return t;
    }();
    auto c = a.to_canonical();
    return limbs_geq(c, half) && c != half;
}

inline bool Fp2::lexicographically_largest() const {
    if (!c1.is_zero()) return fp_lexicographically_largest(c1);
    return fp_lexicographically_largest(c0);
}

struct Fp6 {
    Fp2 c0, c1, c2;

    static Fp6 zero() { return {}; }
    static Fp6 one() { return {Fp2::one(), Fp2::zero(), Fp2::zero()}; }

    bool is_zero() const { return c0.is_zero() && c1.is_zero() && c2.is_zero(); }
    friend bool operator==(const Fp6&, const Fp6&) = default;

    friend Fp6 operator+(const Fp6& a, const Fp6& b) { return {a.c0 + b.c0, a.c1 + b.c1, a.c2 + b.c2}; }
    friend Fp6 operator-(const Fp6& a, const Fp6& b) { return {a.c0 - b.c0, a.c1 - b.c1, a.c2 - b.c2}; }
    Fp6 operator-() const { return {-c0, -c1, -c2}; }

    friend Fp6 operator*(const Fp6& a, const Fp6& b) {
        Fp2 t0 = a.c0 * b.c0;
        Fp2 t1 = a.c1 * b.c1;
        Fp2 t2 = a.c2 * b.c2;
        Fp2 r0 = t0 + ((a.c1 + a.c2) * (b.c1 + b.c2) - t1 - t2).mul_by_xi();
        Fp2 r1 = (a.c0 + a.c1) * (b.c0 + b.c1) - t0 - t1 + t2.mul_by_xi();
        Fp2 r2 = (a.c0 + a.c2) * (b.c0 + b.c2) - t0 - t2 + t1;
        return {r0, r1, r2};
    }

    friend Fp6 operator*(const Fp6& a, const Fp2& s) { return {a.c0 * s, a.c1 * s, a.c2 * s}; }

    Fp6 square() const { return *this * *this; }

    /// Multiplication by v.
    Fp6 mul_by_v() const { return {c2.mul_by_xi(), c0, c1}; }

    /// Multiplication by b0 + b1 v.
    Fp6 mul_by_01(const Fp2& b0, const Fp2& b1) const {
        Fp2 t0 = c0 * b0;
        Fp2 t1 = c1 * b1;
        return {t0 + (c2 * b1).mul_by_xi(), (c0 + c1) * (b0 + b1) - t0 - t1, t1 + c2 * b0};
    }

    /// Multiplication by b1 v.
    Fp6 mul_by_1(const Fp2& b1) const { return {(c2 * b1).mul_by_xi(), c0 * b1, c1 * b1}; }

    Fp6 inverse() const {
        Fp2 t0 = c0.square() - (c1 * c2).mul_by_xi();
        Fp2 t1 = c2.square().mul_by_xi() - c0 * c1;
        Fp2 t2 = c1.square() - c0 * c2;
        Fp2 t = c0 * t0 + (c2 * t1 + c1 * t2).mul_by_xi();
        Fp2 ti = t.inverse();
        return {t0 * ti, t1 * ti, t2 * ti};
    }
};

struct Fp12 {
    Fp6 c0, c1;

    static Fp12 one() { return {Fp6::one(), Fp6::zero()}; }

    bool is_one() const { return *this == one(); }
    friend bool operator==(const Fp12&, const Fp12&) = default;

    friend Fp12 operator*(const Fp12& a, const Fp12& b) {
        Fp6 t0 = a.c0 * b.c0;
        Fp6 t1 = a.c1 * b.c1;
        Fp6 r1 = (a.c0 + a.c1) * (b.c0 + b.c1) - t0 - t1;
        return {t0 + t1.mul_by_v(), r1};
    }

    Fp12& operator*=(const Fp12& o) { return *this = *this * o; }

    Fp12 square() const {
        Fp6 t = c0 * c1;
        Fp6 r0 = (c0 + c1) * (c0 + c1.mul_by_v()) - t - t.mul_by_v();
        return {r0, t + t};
    }

    /// Multiplication by the sparse element d0 + d2 w^2 + d3 w^3 (line functions).
    Fp12 mul_by_023(const Fp2& d0, const Fp2& d2, const Fp2& d3) const {
        Fp6 t0 = c0.mul_by_01(d0, d2);
        Fp6 t1 = c1.mul_by_1(d3);
        Fp6 r1 = (c0 + c1).mul_by_01(d0, d2 + d3) - t0 - t1;
        return {t0 + t1.mul_by_v(), r1};
    }

    /// Squaring for elements of the cyclotomic subgroup (Granger-Scott).
    Fp12 cyclotomic_square() const {
        auto fp4_square = [](const Fp2& a, const Fp2& b) {
            Fp2 t0 = a.square();
            Fp2 t1 = b.square();
            return std::pair{t1.mul_by_xi() + t0, (a + b).square() - t0 - t1};
        };
        Fp2 z0 = c0.c0, z4 = c0.c1, z3 = c0.c2;
        Fp2 z2 = c1.c0, z1 = c1.c1, z5 = c1.c2;

        auto [a0, a1] = fp4_square(z0, z1);
        z0 = (a0 - z0).dbl() + a0;
        z1 = (a1 + z1).dbl() + a1;

        auto [b0, b1] = fp4_square(z2, z3);
        auto [d0, d1] = fp4_square(z4, z5);
        z4 = (b0 - z4).dbl() + b0;
        z5 = (b1 + z5).dbl() + b1;

        Fp2 t = d1.mul_by_xi();
        z2 = (t + z2).dbl() + t;
        z3 = (d0 - z3).dbl() + d0;
        return {{z0, z4, z3}, {z2, z1, z5}};
    }

    /// Frobenius to the power p^6; inverse on the cyclotomic subgroup.
    Fp12 conjugate() const { return {c0, -c1}; }

    Fp12 inverse() const {
        Fp6 t = (c0.square() - c1.square().mul_by_v()).inverse();
        return {c0 * t, -(c1 * t)};
    }

    /// x -> x^p.
    Fp12 frobenius() const {
        // Coefficient of w^k picks up xi^(k(p-1)/6).
        static const std::array<Fp2, 6> gamma = [] {
            Limbs<6> e = Fp::modulus;
            Limbs<6> one{};
            one[0] = 1;
            limbs_sub(e, one);
            // divide by 6: p - 1 is divisible by 6
            u128 rem = 0;
            for (std::size_t i = 6; i-- > 0;) {
                u128 cur = (rem << 64) | e[i];
                e[i] = static_cast<std::uint64_t>(cur / 6);
                rem = cur % 6;
            }
            Fp2 g1 = Fp2{Fp::one(), Fp::one()}.pow(e);
            std::array<Fp2, 6> g{};
            g[0] = Fp2::one();
            for (std::size_t k = 1; k < 6; ++k) g[k] = g[k - 1] * g1;
            return g;
        }();
        // c0 holds w^0, w^2, w^4; c1 holds w^1, w^3, w^5.
        return {{c0.c0.conjugate(), c0.c1.conjugate() * gamma[2], c0.c2.conjugate() * gamma[4]},
                {c1.c0.conjugate() * gamma[1], c1.c1.conjugate() * gamma[3], c1.c2.conjugate() * gamma[5]}};
    }

    template <std::size_t M>
    Fp12 pow(const Limbs<M>& e) const {
        Fp12 acc = one();
        for (std::size_t i = limbs_bit_length(e); i-- > 0;) {
            acc = acc.square();
            if (limbs_bit(e, i)) acc = acc * *this;
        }
        return acc;
    }
};

}  // namespace chamauth::bls12_381

#endif
