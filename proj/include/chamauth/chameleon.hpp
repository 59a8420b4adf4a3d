#ifndef CHAMAUTH_CHAMELEON_HPP
#define CHAMAUTH_CHAMELEON_HPP

#include <optional>
#include <utility>

#include "chamauth/group/group.hpp"

/// Chameleon collision signature. The key pair is a single trapdoor x with
/// public key y = g^(1/x), published in both source groups so the hash
/// equation (G1) and the pairing check (G1 x G2) can both use it:
///
///   Hash:  h = m * y1^r,  R = g1^r            (m = H(M))
///   Check: e(h / m, g2) == e(R, y2)
///   Sign:  R' = (h / m')^x
///
/// A collision (M', R') under h doubles as a signature on M'.
namespace chamauth::chameleon {

template <PairingGroup G>
struct PublicKey {
    typename G::G1 y1;
    typename G::G2 y2;

    friend bool operator==(const PublicKey&, const PublicKey&) = default;
};

template <PairingGroup G>
struct KeyPair {
    typename G::Scalar sk;
    PublicKey<G> pk;
};

template <PairingGroup G>
struct ChameleonHash {
    typename G::G1 h;

    friend bool operator==(const ChameleonHash&, const ChameleonHash&) = default;
};

/// Check parameter R. Never the identity.
template <PairingGroup G>
class CheckParam {
public:
    static CheckParam make(const G& grp, const typename G::G1& r) {
        if (grp.is_identity(r)) throw Error(ErrorCode::invalid_argument, "check parameter must not be the identity");
        return CheckParam(r);
    }

    const typename G::G1& value() const { return r_; }
    friend bool operator==(const CheckParam&, const CheckParam&) = default;

private:
    explicit CheckParam(const typename G::G1& r) : r_(r) {}
    typename G::G1 r_;
};

/// A (message, check parameter) pair; validity is only established by check().
template <PairingGroup G>
struct CollisionClaim {
    Bytes message;
    CheckParam<G> check;
};

template <PairingGroup G>
struct HashOutput {
    ChameleonHash<G> hash;
    CheckParam<G> check;
};

/// Key pair for a given trapdoor (x != 0).
template <PairingGroup G>
KeyPair<G> keypair_from_secret(const G& grp, const typename G::Scalar& x) {
    if (x.is_zero()) throw Error(ErrorCode::invalid_key, "trapdoor must be nonzero");
    auto inv = x.inverse();
    return {x, {grp.pow(grp.g1(), inv), grp.pow(grp.g2(), inv)}};
}

template <PairingGroup G>
KeyPair<G> keygen(const G& grp, Rng& rng) {
    return keypair_from_secret(grp, grp.random_scalar(rng));
}

/// e(y1, g2) == e(g1, y2): both halves carry the same exponent 1/x.
template <PairingGroup G>
bool is_consistent(const G& grp, const PublicKey<G>& pk) {
    if (grp.is_identity(pk.y1) || grp.is_identity(pk.y2)) return false;
    return grp.pair(pk.y1, grp.g2()) == grp.pair(grp.g1(), pk.y2);
}

/// Hash with an explicit group element m and randomness r.
template <PairingGroup G>
HashOutput<G> hash_element(const G& grp, const PublicKey<G>& pk, const typename G::G1& m,
                           const typename G::Scalar& r) {
    auto h = grp.mul(m, grp.pow(pk.y1, r));
    auto big_r = grp.pow(grp.g1(), r);
    return {{h}, CheckParam<G>::make(grp, big_r)};
}

/// Hash(pk, M) -> (h, R) with fresh r in [1, q).
template <PairingGroup G>
HashOutput<G> hash(const G& grp, const PublicKey<G>& pk, ByteView message, Rng& rng) {
    return hash_element(grp, pk, grp.hash_to_g1(message), grp.random_scalar(rng));
}

template <PairingGroup G>
bool check_element(const G& grp, const PublicKey<G>& pk, const ChameleonHash<G>& h, const typename G::G1& m,
                   const CheckParam<G>& r) {
    return grp.pair(grp.div(h.h, m), grp.g2()) == grp.pair(r.value(), pk.y2);
}

/// Check(pk, h, M, R).
template <PairingGroup G>
bool check(const G& grp, const PublicKey<G>& pk, const ChameleonHash<G>& h, ByteView message, const CheckParam<G>& r) {
    return check_element(grp, pk, h, grp.hash_to_g1(message), r);
}

template <PairingGroup G>
CheckParam<G> sign_element(const G& grp, const typename G::Scalar& sk, const ChameleonHash<G>& h,
                           const typename G::G1& m_new) {
    auto base = grp.div(h.h, m_new);
    if (grp.is_identity(base)) throw Error(ErrorCode::degenerate_base, "h / H(M') is the identity");
    return CheckParam<G>::make(grp, grp.pow(base, sk));
}

/// Sign(sk, h, M') -> R' = (h / H(M'))^x. Deterministic.
template <PairingGroup G>
CheckParam<G> sign(const G& grp, const typename G::Scalar& sk, const ChameleonHash<G>& h, ByteView new_message) {
    return sign_element(grp, sk, h, grp.hash_to_g1(new_message));
}

template <PairingGroup G>
bool verify_claim(const G& grp, const PublicKey<G>& pk, const ChameleonHash<G>& h, const CollisionClaim<G>& claim) {
    return check(grp, pk, h, claim.message, claim.check);
}

/// Verify(pk, h, M, R, M', R'): both claims must pass check.
template <PairingGroup G>
bool verify(const G& grp, const PublicKey<G>& pk, const ChameleonHash<G>& h, const CollisionClaim<G>& a,
            const CollisionClaim<G>& b) {
    bool ok_a = verify_claim(grp, pk, h, a);
    bool ok_b = verify_claim(grp, pk, h, b);
    return ok_a && ok_b;
}

// Serialization -------------------------------------------------------------

template <PairingGroup G>
Bytes encode_public_key(const G& grp, const PublicKey<G>& pk) {
    Bytes out = grp.encode(pk.y1);
    append(out, grp.encode(pk.y2));
    return out;
}

template <PairingGroup G>
PublicKey<G> decode_public_key(const G& grp, ByteView in) {
    if (in.size() != grp.g1_size() + grp.g2_size()) throw Error(ErrorCode::invalid_encoding, "bad public key length");
    return {grp.decode_g1(in.first(grp.g1_size())), grp.decode_g2(in.subspan(grp.g1_size()))};
}

template <PairingGroup G>
CheckParam<G> decode_check_param(const G& grp, ByteView in) {
    auto r = grp.decode_g1(in);
    if (grp.is_identity(r)) throw Error(ErrorCode::invalid_encoding, "identity check parameter");
    return CheckParam<G>::make(grp, r);
}

inline constexpr std::array<std::uint8_t, 4> key_file_magic{'C', 'H', 'A', 'M'};
inline constexpr std::uint8_t key_file_version = 1;

/// Key file: "CHAM" | version | [sk (32 bytes)] | [y1 || y2]. Which parts
/// are present is implied by the length for the given backend.
template <PairingGroup G>
Bytes encode_key_file(const G& grp, const std::optional<typename G::Scalar>& sk,
                      const std::optional<PublicKey<G>>& pk) {
    Bytes out(key_file_magic.begin(), key_file_magic.end());
    out.push_back(key_file_version);
    if (sk) append(out, grp.encode_scalar(*sk));
    if (pk) append(out, encode_public_key(grp, *pk));
    return out;
}

template <PairingGroup G>
struct KeyFile {
    std::optional<typename G::Scalar> sk;
    std::optional<PublicKey<G>> pk;
};

template <PairingGroup G>
KeyFile<G> decode_key_file(const G& grp, ByteView in) {
    ByteReader r(in);
    auto magic = r.take(4);
    if (!std::equal(magic.begin(), magic.end(), key_file_magic.begin()))
        throw Error(ErrorCode::invalid_encoding, "not a key file");
    if (r.u8() != key_file_version) throw Error(ErrorCode::invalid_encoding, "unsupported key file version");
    const std::size_t pk_len = grp.g1_size() + grp.g2_size();
    KeyFile<G> kf;
    std::size_t rest = r.remaining();
    if (rest == 32 || rest == 32 + pk_len) kf.sk = grp.decode_scalar(r.take(32));
    if (r.remaining() == pk_len) kf.pk = decode_public_key(grp, r.take(pk_len));
    r.expect_done();
    if (!kf.sk && !kf.pk) throw Error(ErrorCode::invalid_encoding, "empty key file");
    if (kf.sk && kf.sk->is_zero()) throw Error(ErrorCode::invalid_key, "zero trapdoor");
    return kf;
}

}  // namespace chamauth::chameleon

#endif
