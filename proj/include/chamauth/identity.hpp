#ifndef CHAMAUTH_IDENTITY_HPP
#define CHAMAUTH_IDENTITY_HPP

#include <set>

#include "chamauth/biometric.hpp"
#include "chamauth/chameleon.hpp"
#include "chamauth/ledger.hpp"

namespace chamauth {

// IDP signature ------------------------------------------------------------
//
// Deterministic Schnorr over G1:
//   k = H("CHAMAUTH-IDP-K" || sk || msg),  R = g1^k
//   e = H("CHAMAUTH-IDP-E" || R || vk || msg),  s = k + e * sk
//   sig = R || s;  valid iff g1^s == R * vk^e
// None of this work is part of the scheme's cost model, so it runs uncounted.

template <PairingGroup G>
struct IdpKey {
    typename G::Scalar sk;
    typename G::G1 vk;
};

namespace detail {
template <PairingGroup G>
typename G::Scalar idp_hash(const G& grp, std::string_view label, std::initializer_list<ByteView> parts) {
    Sha256 h;
    h.update(label);
    for (auto p : parts) h.update(p);
    return grp.scalar_from_bytes(h.finish());
}
}  // namespace detail

template <PairingGroup G>
IdpKey<G> idp_key_from_secret(const G& grp, const typename G::Scalar& sk) {
    if (sk.is_zero()) throw Error(ErrorCode::invalid_key, "IDP signing key must be nonzero");
    UncountedScope quiet;
    return {sk, grp.pow(grp.g1(), sk)};
}

template <PairingGroup G>
IdpKey<G> idp_keygen(const G& grp, Rng& rng) {
    return idp_key_from_secret(grp, grp.random_scalar(rng));
}

template <PairingGroup G>
Bytes idp_sign(const G& grp, const IdpKey<G>& key, ByteView msg) {
    UncountedScope quiet;
    auto sk_bytes = grp.encode_scalar(key.sk);
    auto k = detail::idp_hash(grp, "CHAMAUTH-IDP-K", {sk_bytes, msg});
    if (k.is_zero()) k = grp.scalar_from_u64(1);
    auto r = grp.pow(grp.g1(), k);
    auto r_bytes = grp.encode(r);
    auto vk_bytes = grp.encode(key.vk);
    auto e = detail::idp_hash(grp, "CHAMAUTH-IDP-E", {r_bytes, vk_bytes, msg});
    Bytes sig = r_bytes;
    append(sig, grp.encode_scalar(k + e * key.sk));
    return sig;
}

template <PairingGroup G>
bool idp_verify(const G& grp, const typename G::G1& vk, ByteView msg, ByteView sig) {
    UncountedScope quiet;
    if (sig.size() != grp.g1_size() + 32) return false;
    try {
        auto r_bytes = sig.first(grp.g1_size());
        auto r = grp.decode_g1(r_bytes);
        auto s = grp.decode_scalar(sig.subspan(grp.g1_size()));
        if (grp.encode_scalar(s) != Bytes(sig.begin() + grp.g1_size(), sig.end())) return false;
        auto vk_bytes = grp.encode(vk);
        auto e = detail::idp_hash(grp, "CHAMAUTH-IDP-E", {r_bytes, vk_bytes, msg});
        return grp.pow(grp.g1(), s) == grp.mul(r, grp.pow(vk, e));
    } catch (const Error&) {
        return false;
    }
}

// Identity records ---------------------------------------------------------

/// Metaverse identity token (T, y, h, M, R) with the IDP's signature.
template <PairingGroup G>
struct Mit {
    bio::Code T;
    chameleon::PublicKey<G> y;
    chameleon::ChameleonHash<G> h;
    Bytes M;
    chameleon::CheckParam<G> R;
    Bytes idp_sig;

    chameleon::CollisionClaim<G> base_claim() const { return {M, R}; }
};

/// Signed portion: T || y1 || y2 || h || len(M) || M || R.
template <PairingGroup G>
Bytes mit_signed_bytes(const G& grp, const Mit<G>& mit) {
    Bytes out = bio::encode_code(mit.T);
    append(out, grp.encode(mit.y.y1));
    append(out, grp.encode(mit.y.y2));
    append(out, grp.encode(mit.h.h));
    append_field(out, mit.M);
    append(out, grp.encode(mit.R.value()));
    return out;
}

/// Full encoding: the signed portion followed by the length-prefixed signature.
template <PairingGroup G>
Bytes encode_mit(const G& grp, const Mit<G>& mit) {
    Bytes out = mit_signed_bytes(grp, mit);
    append_field(out, mit.idp_sig);
    return out;
}

template <PairingGroup G>
Mit<G> read_mit(const G& grp, ByteReader& r) {
    auto code = r.field();
    auto T = bio::code_from_bytes(code);
    auto y1 = grp.decode_g1(r.take(grp.g1_size()));
    auto y2 = grp.decode_g2(r.take(grp.g2_size()));
    auto h = grp.decode_g1(r.take(grp.g1_size()));
    auto M = r.field();
    auto R = chameleon::decode_check_param(grp, r.take(grp.g1_size()));
    auto sig = r.field();
    return Mit<G>{T, {y1, y2}, {h}, std::move(M), R, std::move(sig)};
}

template <PairingGroup G>
Mit<G> decode_mit(const G& grp, ByteView in) {
    ByteReader r(in);
    auto mit = read_mit(grp, r);
    r.expect_done();
    return mit;
}

/// Ledger key of an MIT: SHA-256 of its full encoding.
template <PairingGroup G>
Digest mit_digest(const G& grp, const Mit<G>& mit) {
    return sha256(encode_mit(grp, mit));
}

template <PairingGroup G>
bool mit_signature_valid(const G& grp, const typename G::G1& idp_vk, const Mit<G>& mit) {
    return idp_verify(grp, idp_vk, mit_signed_bytes(grp, mit), mit.idp_sig);
}

/// VID = (M_a, R_a): avatar information and its collision under the MIT's h.
template <PairingGroup G>
struct VirtualIdentity {
    chameleon::CollisionClaim<G> claim;
};

/// PID = (M_a', R_a'): encoded watermarked feature and its collision, plus
/// the watermark salt.
template <PairingGroup G>
struct PhysicalIdentity {
    chameleon::CollisionClaim<G> claim;
    Bytes salt;

    bio::BioFeature feature() const { return {bio::decode_code(claim.message), true}; }
};

template <PairingGroup G>
void write_vid(const G& grp, Bytes& out, const VirtualIdentity<G>& vid) {
    append_field(out, vid.claim.message);
    append(out, grp.encode(vid.claim.check.value()));
}

template <PairingGroup G>
VirtualIdentity<G> read_vid(const G& grp, ByteReader& r) {
    auto m = r.field();
    auto R = chameleon::decode_check_param(grp, r.take(grp.g1_size()));
    return {{std::move(m), R}};
}

template <PairingGroup G>
void write_pid(const G& grp, Bytes& out, const PhysicalIdentity<G>& pid) {
    append_field(out, pid.claim.message);
    append(out, grp.encode(pid.claim.check.value()));
    append_field(out, pid.salt);
}

template <PairingGroup G>
PhysicalIdentity<G> read_pid(const G& grp, ByteReader& r) {
    auto m = r.field();
    auto R = chameleon::decode_check_param(grp, r.take(grp.g1_size()));
    auto salt = r.field();
    return {{std::move(m), R}, std::move(salt)};
}

/// Verify(y, h, (M, R), claim) against the token.
template <PairingGroup G>
bool claim_matches_mit(const G& grp, const Mit<G>& mit, const chameleon::CollisionClaim<G>& claim) {
    return chameleon::verify(grp, mit.y, mit.h, mit.base_claim(), claim);
}

template <PairingGroup G>
VirtualIdentity<G> create_vid(const G& grp, const typename G::Scalar& sk, const Mit<G>& mit, ByteView avatar_info) {
    return {{Bytes(avatar_info.begin(), avatar_info.end()), chameleon::sign(grp, sk, mit.h, avatar_info)}};
}

/// Sample the live biometric, watermark it with the challenge nonce and sign
/// the encoded feature under the MIT's chameleon hash.
template <PairingGroup G>
PhysicalIdentity<G> create_pid(const G& grp, const typename G::Scalar& sk, const Mit<G>& mit,
                               const bio::BioTemplate& live, const bio::Nonce& challenge, ByteView salt,
                               double capture_noise, Rng& rng) {
    auto feature = bio::embed_watermark(bio::capture(live, capture_noise, rng), challenge, salt);
    auto message = bio::encode_code(feature.code);
    auto check = chameleon::sign(grp, sk, mit.h, message);
    return {{std::move(message), check}, Bytes(salt.begin(), salt.end())};
}

// Identity provider --------------------------------------------------------

/// Issues MITs: hashes the anonymous identity under the player's key, signs
/// the token, publishes it on the ledger and records (real_id, digest).
template <PairingGroup G>
class Idp {
public:
    Idp(const G& grp, IdpKey<G> key, Ledger& ledger, Registry& registry)
        : grp_(grp), key_(std::move(key)), ledger_(ledger), registry_(registry) {
        for (const auto& e : ledger_.snapshot()) {
            try {
                used_m_.insert(decode_mit(grp_, e.payload).M);
            } catch (const Error&) {
            }
        }
    }

    const typename G::G1& verification_key() const { return key_.vk; }
    const G& group() const { return grp_; }
    const Ledger& ledger() const { return ledger_; }
    const Registry& registry() const { return registry_; }

    Mit<G> register_player(ByteView real_id, ByteView M, const bio::BioTemplate& T, const chameleon::PublicKey<G>& pk,
                           Rng& rng) {
        if (M.empty()) throw Error(ErrorCode::invalid_argument, "anonymous identity M must be nonempty");
        if (real_id.empty()) throw Error(ErrorCode::invalid_argument, "real identity must be nonempty");
        Bytes m(M.begin(), M.end());
        if (used_m_.count(m)) throw Error(ErrorCode::duplicate_identity, "anonymous identity already registered");
        {
            UncountedScope quiet;
            if (!chameleon::is_consistent(grp_, pk)) throw Error(ErrorCode::invalid_key, "inconsistent public key halves");
        }
        auto out = chameleon::hash(grp_, pk, M, rng);
        Mit<G> mit{T.code, pk, out.hash, std::move(m), out.check, {}};
        mit.idp_sig = idp_sign(grp_, key_, mit_signed_bytes(grp_, mit));
        auto encoded = encode_mit(grp_, mit);
        ledger_.append(encoded);
        registry_.insert(sha256(encoded), real_id);
        used_m_.insert(mit.M);
        return mit;
    }

    std::optional<Bytes> real_identity(const Digest& digest) const { return registry_.lookup(digest); }

private:
    G grp_;
    IdpKey<G> key_;
    Ledger& ledger_;
    Registry& registry_;
    std::set<Bytes> used_m_;
};

}  // namespace chamauth

#endif
