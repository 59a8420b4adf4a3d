#ifndef CHAMAUTH_GROUP_GROUP_HPP
#define CHAMAUTH_GROUP_GROUP_HPP

#include <concepts>

#include "chamauth/group/curve_group.hpp"
#include "chamauth/group/toy_group.hpp"

namespace chamauth {

/// What the scheme needs from a bilinear group backend.
template <class G>
concept PairingGroup = requires(const G& grp, const typename G::G1& a, const typename G::G2& b,
                                const typename G::GT& t, const typename G::Scalar& s, ByteView bytes, Rng& rng) {
    { grp.params() } -> std::convertible_to<const SystemParams&>;
    { grp.g1() } -> std::same_as<typename G::G1>;
    { grp.g2() } -> std::same_as<typename G::G2>;
    { grp.mul(a, a) } -> std::same_as<typename G::G1>;
    { grp.div(a, a) } -> std::same_as<typename G::G1>;
    { grp.pow(a, s) } -> std::same_as<typename G::G1>;
    { grp.pow(b, s) } -> std::same_as<typename G::G2>;
    { grp.pow(t, s) } -> std::same_as<typename G::GT>;
    { grp.pair(a, b) } -> std::same_as<typename G::GT>;
    { grp.hash_to_g1(bytes) } -> std::same_as<typename G::G1>;
    { grp.encode(a) } -> std::same_as<Bytes>;
    { grp.encode(b) } -> std::same_as<Bytes>;
    { grp.decode_g1(bytes) } -> std::same_as<typename G::G1>;
    { grp.decode_g2(bytes) } -> std::same_as<typename G::G2>;
    { grp.random_scalar(rng) } -> std::same_as<typename G::Scalar>;
    { grp.scalar_from_bytes(bytes) } -> std::same_as<typename G::Scalar>;
    { grp.encode_scalar(s) } -> std::same_as<Bytes>;
    { grp.decode_scalar(bytes) } -> std::same_as<typename G::Scalar>;
    { s.inverse() } -> std::same_as<typename G::Scalar>;
    { s * s } -> std::same_as<typename G::Scalar>;
    { s + s } -> std::same_as<typename G::Scalar>;
    { a == a } -> std::convertible_to<bool>;
    { t == t } -> std::convertible_to<bool>;
};

static_assert(PairingGroup<CurveGroup>);
static_assert(PairingGroup<ToyGroup>);

/// Curve backend for a security level in bits (only 128 is available).
inline CurveGroup setup(unsigned security_level) { return CurveGroup::setup(security_level); }

/// Toy exponent-arithmetic backend of prime order q.
inline ToyGroup toy_setup(std::uint64_t q) { return ToyGroup::setup(q); }

}  // namespace chamauth

#endif
