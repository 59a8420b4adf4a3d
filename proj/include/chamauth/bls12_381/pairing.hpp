#ifndef CHAMAUTH_BLS12_381_PAIRING_HPP
#define CHAMAUTH_BLS12_381_PAIRING_HPP

#include "chamauth/bls12_381/curve.hpp"

namespace chamauth::bls12_381 {

// Optimal ate pairing. G2 lives on the M-type sextic twist
// y^2 = x^3 + 4(u + 1); a twist point (x, y) maps to (x / w^2, y / w^3) on
// E(Fp12). Line functions are scaled by factors in Fp2 and w^3, which the
// final exponentiation removes.

namespace detail {

struct Line {
    Fp2 c0, c2, c3;  // c0 + c2 w^2 + c3 w^3
};

/// Doubles t in place and returns the tangent line evaluated at (xp, yp).
inline Line doubling_step(G2Point& t, const Fp& xp, const Fp& yp) {
    Fp2 xx = t.x.square();
    Fp2 yy = t.y.square();
    Fp2 zz = t.z.square();
    Fp2 three_xx = xx.dbl() + xx;
    Fp2 c0 = three_xx * t.x - yy.dbl();
    Fp2 c2 = -(three_xx * zz * xp);
    t = t.dbl();
    Fp2 c3 = t.z * zz * yp;
    return {c0, c2, c3};
}

/// Adds the affine point (xq, yq) to t in place and returns the chord line.
inline Line addition_step(G2Point& t, const Fp2& xq, const Fp2& yq, const Fp& xp, const Fp& yp) {
    Fp2 z1z1 = t.z.square();
    Fp2 u2 = xq * z1z1;
    Fp2 s2 = yq * t.z * z1z1;
    Fp2 h = u2 - t.x;
    Fp2 r = s2 - t.y;
    Fp2 hz = h * t.z;
    Line line{r * xq - yq * hz, -(r * xp), hz * yp};
    Fp2 hh = h.square();
    Fp2 hhh = h * hh;
    Fp2 v = t.x * hh;
    G2Point n;
    n.x = r.square() - hhh - v.dbl();
    n.y = r * (v - n.x) - t.y * hhh;
    n.z = hz;
    t = n;
    return line;
}

/// a^z for the (negative) curve parameter z, a in the cyclotomic subgroup.
inline Fp12 cyclotomic_pow_param(const Fp12& a) {
    Fp12 acc = a;
    for (int i = 62; i >= 0; --i) {
        acc = acc.cyclotomic_square();
        if ((curve_param_abs >> i) & 1) acc = acc * a;
    }
    return acc.conjugate();
}

}  // namespace detail

inline Fp12 miller_loop(const G1Point& p, const G2Point& q) {
    auto [xp, yp] = p.to_affine();
    auto [xq, yq] = q.to_affine();
    G2Point t = G2Point::from_affine(xq, yq);
    Fp12 f = Fp12::one();
    for (int i = 62; i >= 0; --i) {
        auto ld = detail::doubling_step(t, xp, yp);
        f = f.square().mul_by_023(ld.c0, ld.c2, ld.c3);
        if ((curve_param_abs >> i) & 1) {
            auto la = detail::addition_step(t, xq, yq, xp, yp);
            f = f.mul_by_023(la.c0, la.c2, la.c3);
        }
    }
    return f.conjugate();
}

/// Raises to 3 (p^12 - 1) / r. The factor 3 is coprime to r, so the result is
/// still a non-degenerate bilinear map; it uses the decomposition
/// 3 (p^4 - p^2 + 1) / r = (z - 1)^2 (z + p) (z^2 + p^2 - 1) + 3.
inline Fp12 final_exponentiation(const Fp12& f) {
    Fp12 t = f.conjugate() * f.inverse();  // ^(p^6 - 1)
    t = t.frobenius().frobenius() * t;     // ^(p^2 + 1)

    Fp12 a = detail::cyclotomic_pow_param(t) * t.conjugate();   // t^(z-1)
    a = detail::cyclotomic_pow_param(a) * a.conjugate();        // t^((z-1)^2)
    Fp12 b = detail::cyclotomic_pow_param(a) * a.frobenius();   // ^(z+p)
    Fp12 c = detail::cyclotomic_pow_param(detail::cyclotomic_pow_param(b)) * b.frobenius().frobenius() *
             b.conjugate();                                      // ^(z^2+p^2-1)
    return c * t.cyclotomic_square() * t;
}

inline Fp12 pairing(const G1Point& p, const G2Point& q) {
    if (p.is_identity() || q.is_identity()) return Fp12::one();
    return final_exponentiation(miller_loop(p, q));
}

}  // namespace chamauth::bls12_381

#endif
