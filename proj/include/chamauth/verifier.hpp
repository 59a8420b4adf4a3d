#ifndef CHAMAUTH_VERIFIER_HPP
#define CHAMAUTH_VERIFIER_HPP

#include "chamauth/identity.hpp"
#include "chamauth/protocol/wire.hpp"

namespace chamauth {

/// What a verifier trusts: the IDP's verification key and read-only access
/// to the public ledger. Nothing else is reachable during authentication.
template <PairingGroup G>
struct TrustAnchor {
    typename G::G1 idp_vk;
    const Ledger* ledger = nullptr;
};

/// Step (a): IDP signature valid and the token is published.
template <PairingGroup G>
bool check_mit(const G& grp, const TrustAnchor<G>& anchor, const Mit<G>& mit) {
    if (!mit_signature_valid(grp, anchor.idp_vk, mit)) return false;
    return anchor.ledger == nullptr || anchor.ledger->contains(mit_digest(grp, mit));
}

/// Steps (d), (e), (f) on a physical identity against the expected nonce.
/// Returns the failing step or nullopt when all pass.
template <PairingGroup G>
std::optional<proto::AbortReason> check_pid(const G& grp, const Mit<G>& mit, const PhysicalIdentity<G>& pid,
                                            const bio::Nonce& expected, double threshold) {
    bio::BioFeature feature;
    try {
        feature = pid.feature();
    } catch (const Error&) {
        return proto::AbortReason::bad_pid;
    }
    if (bio::extract_watermark(feature, pid.salt) != expected) return proto::AbortReason::bad_freshness;
    if (!bio::match(feature, bio::BioTemplate{mit.T, {}}, threshold)) return proto::AbortReason::bad_biometric;
    if (!claim_matches_mit(grp, mit, pid.claim)) return proto::AbortReason::bad_pid;
    return std::nullopt;
}

}  // namespace chamauth

#endif
