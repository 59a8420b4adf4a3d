#ifndef CHAMAUTH_GROUP_CURVE_GROUP_HPP
#define CHAMAUTH_GROUP_CURVE_GROUP_HPP

#include <string>

#include "chamauth/bls12_381/hash_to_curve.hpp"
#include "chamauth/bls12_381/pairing.hpp"
#include "chamauth/group/params.hpp"
#include "chamauth/op_counter.hpp"

namespace chamauth {

/// BLS12-381 backend. G1/G2 elements are Jacobian points, GT elements live in
/// the order-r subgroup of Fp12. Counted methods record into the thread's
/// OpCounter; encoding, decoding and hashing are not costed.
class CurveGroup {
public:
    using Scalar = bls12_381::Fr;
    using G1 = bls12_381::G1Point;
    using G2 = bls12_381::G2Point;
    using GT = bls12_381::Fp12;

    static constexpr std::string_view backend_name = "curve";
    static constexpr std::string_view hash_dst = "CHAMAUTH-H2G-v1";

    static CurveGroup setup(unsigned security_level) {
        if (security_level != 128)
            throw Error(ErrorCode::unsupported_level,
                        "unsupported security level " + std::to_string(security_level) + " (curve backend supports 128)");
        return CurveGroup();
    }

    const SystemParams& params() const { return params_; }

    G1 g1() const { return G1::generator(); }
    G2 g2() const { return G2::generator(); }
    G1 g1_identity() const { return G1::identity(); }

    // Costed operations.
    G1 mul(const G1& a, const G1& b) const {
        record_op(Op::m1);
        return a + b;
    }
    G1 div(const G1& a, const G1& b) const {
        record_op(Op::m1);
        return a - b;
    }
    G1 pow(const G1& a, const Scalar& s) const {
        record_op(Op::e1);
        return a.mul(s);
    }
    G2 pow(const G2& a, const Scalar& s) const {
        record_op(Op::e2);
        return a.mul(s);
    }
    GT pow(const GT& a, const Scalar& s) const {
        record_op(Op::et);
        return a.pow(s.to_canonical());
    }
    GT pair(const G1& a, const G2& b) const {
        record_op(Op::pairing);
        return bls12_381::pairing(a, b);
    }

    G1 hash_to_g1(ByteView message) const { return bls12_381::hash_to_g1(message, hash_dst); }

    bool is_identity(const G1& a) const { return a.is_identity(); }
    bool is_identity(const G2& a) const { return a.is_identity(); }

    std::size_t g1_size() const { return bls12_381::g1_compressed_size; }
    std::size_t g2_size() const { return bls12_381::g2_compressed_size; }

    Bytes encode(const G1& a) const {
        auto e = bls12_381::encode_g1(a);
        return Bytes(e.begin(), e.end());
    }
    Bytes encode(const G2& a) const {
        auto e = bls12_381::encode_g2(a);
        return Bytes(e.begin(), e.end());
    }
    /// Fixture-only: the twelve Fp coefficients, big-endian, in tower order.
    Bytes encode(const GT& a) const {
        Bytes out;
        for (const auto* c6 : {&a.c0, &a.c1})
            for (const auto* c2 : {&c6->c0, &c6->c1, &c6->c2})
                for (const auto* c : {&c2->c0, &c2->c1}) {
                    auto b = c->to_bytes();
                    out.insert(out.end(), b.begin(), b.end());
                }
        return out;
    }

    G1 decode_g1(ByteView in) const {
        auto p = bls12_381::decode_g1(in);
        if (!p) throw Error(ErrorCode::invalid_encoding, "invalid G1 encoding");
        return *p;
    }
    G2 decode_g2(ByteView in) const {
        auto p = bls12_381::decode_g2(in);
        if (!p) throw Error(ErrorCode::invalid_encoding, "invalid G2 encoding");
        return *p;
    }

    /// Uniform in [1, r).
    Scalar random_scalar(Rng& rng) const {
        for (;;) {
            std::array<std::uint8_t, 32> b{};
            rng.fill(b);
            b[0] &= 0x7f;  // r < 2^255
            auto s = Scalar::from_bytes(b);
            if (s && !s->is_zero()) return *s;
        }
    }

    Scalar scalar_from_u64(std::uint64_t v) const { return Scalar::from_u64(v); }
    /// Reduces an arbitrary byte string (e.g. a digest) into the scalar field.
    Scalar scalar_from_bytes(ByteView be) const { return Scalar::from_bytes_wide(be); }
    Bytes encode_scalar(const Scalar& s) const {
        auto b = s.to_bytes();
        return Bytes(b.begin(), b.end());
    }
    Scalar decode_scalar(ByteView in) const {
        if (in.size() != 32) throw Error(ErrorCode::invalid_encoding, "scalar must be 32 bytes");
        return Scalar::from_bytes_wide(in);
    }

private:
    CurveGroup() {
        params_.group_id = "bls12-381";
        params_.backend = std::string(backend_name);
        auto r = Scalar::modulus;
        std::array<std::uint8_t, 32> be{};
        for (std::size_t i = 0; i < 32; ++i) be[i] = static_cast<std::uint8_t>(r[(31 - i) / 8] >> (8 * ((31 - i) % 8)));
        params_.order_hex = to_hex(be);
        params_.security_bits = 128;
        params_.hash_dst = std::string(hash_dst);
    }

    SystemParams params_;
};

}  // namespace chamauth

#endif
