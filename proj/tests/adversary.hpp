#ifndef CHAMAUTH_TESTS_ADVERSARY_HPP
#define CHAMAUTH_TESTS_ADVERSARY_HPP

#include "world.hpp"

/// Adversarial one-party fixtures. Each attack plays the prover side by hand
/// against a real verifier and reports how the verifier ended the session.
namespace chamauth::testing {

enum class Attack { stale_challenge, spliced_feature, random_r, cross_key_r, tampered_mit, wrong_vid, impostor_feature };

inline constexpr Attack acceptance_attacks[] = {Attack::stale_challenge, Attack::spliced_feature, Attack::random_r,
                                                Attack::cross_key_r, Attack::tampered_mit};

inline const char* to_string(Attack a) {
    switch (a) {
        case Attack::stale_challenge: return "stale_challenge";
        case Attack::spliced_feature: return "spliced_feature";
        case Attack::random_r: return "random_r";
        case Attack::cross_key_r: return "cross_key_r";
        case Attack::tampered_mit: return "tampered_mit";
        case Attack::wrong_vid: return "wrong_vid";
        case Attack::impostor_feature: return "impostor_feature";
    }
    return "?";
}

inline proto::AbortReason expected_reason(Attack a) {
    switch (a) {
        case Attack::stale_challenge: return proto::AbortReason::bad_freshness;
        case Attack::tampered_mit: return proto::AbortReason::bad_mit;
        case Attack::wrong_vid: return proto::AbortReason::bad_vid;
        case Attack::impostor_feature: return proto::AbortReason::bad_biometric;
        default: return proto::AbortReason::bad_pid;
    }
}

/// Players with one PID each from an earlier, honestly completed session.
template <PairingGroup G>
class AttackLab {
public:
    AttackLab(World<G>& w, std::size_t players) : w_(w) {
        for (std::size_t i = 0; i < players; ++i) {
            players_.push_back(w_.enroll("player-" + std::to_string(i)));
            auto nonce = bio::fresh_challenge(w_.rng).nonce;
            old_pids_.push_back(proto::respond_to_challenge(w_.grp, players_.back(), nonce, 0.1, w_.rng));
        }
    }

    /// Runs one attack against the i-th player's identity. nullopt means
    /// the verifier accepted.
    std::optional<proto::AbortReason> run(Attack attack, std::size_t i) {
        const auto& grp = w_.grp;
        const auto& victim = players_[i % players_.size()];
        const auto& other = players_[(i + 1) % players_.size()];

        auto mit = victim.mit;
        auto vid = victim.vid;
        if (attack == Attack::tampered_mit) tamper(mit, i);
        if (attack == Attack::wrong_vid) vid = create_vid(grp, other.sk, victim.mit, to_bytes("borrowed avatar"));

        proto::OnePartyVerifier<G> verifier(grp, w_.anchor(), w_.rng);
        proto::SessionId sid{};
        w_.rng.fill(sid);
        auto out = verifier.on_frame(proto::encode_frame({proto::MsgType::claim, sid, proto::encode_claim_body(grp, mit, vid)}));
        if (verifier.done()) return verifier.abort_reason();
        auto challenge = proto::decode_frame(out.at(0));
        bio::Nonce nonce{};
        std::copy(challenge.body.begin(), challenge.body.end(), nonce.begin());

        auto pid = forge_pid(attack, victim, other, old_pids_[i % old_pids_.size()], nonce);
        Bytes body;
        write_pid(grp, body, pid);
        verifier.on_frame(proto::encode_frame({proto::MsgType::response, sid, std::move(body)}));
        if (verifier.status() == proto::Status::accepted) return std::nullopt;
        return verifier.abort_reason();
    }

    /// A PID for `nonce` built without the victim's trapdoor (except for
    /// the honest-key cases that isolate a single failing check).
    PhysicalIdentity<G> forge_pid(Attack attack, const proto::Credential<G>& victim, const proto::Credential<G>& other,
                                  const PhysicalIdentity<G>& old_pid, const bio::Nonce& nonce) {
        const auto& grp = w_.grp;
        switch (attack) {
            case Attack::stale_challenge: return old_pid;
            case Attack::spliced_feature: {
                auto salt = w_.rng.bytes(bio::salt_bytes);
                bio::BioFeature raw{bio::decode_code(old_pid.claim.message), false};
                auto spliced = bio::embed_watermark(raw, nonce, salt);
                return {{bio::encode_code(spliced.code), old_pid.claim.check}, salt};
            }
            case Attack::random_r: {
                auto salt = w_.rng.bytes(bio::salt_bytes);
                auto feature = bio::embed_watermark(bio::capture(victim.live, 0.1, w_.rng), nonce, salt);
                auto r = grp.pow(grp.g1(), grp.random_scalar(w_.rng));
                return {{bio::encode_code(feature.code), chameleon::CheckParam<G>::make(grp, r)}, salt};
            }
            case Attack::cross_key_r: {
                auto salt = w_.rng.bytes(bio::salt_bytes);
                auto feature = bio::embed_watermark(bio::capture(victim.live, 0.1, w_.rng), nonce, salt);
                auto message = bio::encode_code(feature.code);
                return {{message, chameleon::sign(grp, other.sk, victim.mit.h, message)}, salt};
            }
            case Attack::impostor_feature: {
                auto salt = w_.rng.bytes(bio::salt_bytes);
                auto feature = bio::embed_watermark(bio::capture(other.live, 0.1, w_.rng), nonce, salt);
                auto message = bio::encode_code(feature.code);
                return {{message, chameleon::sign(grp, victim.sk, victim.mit.h, message)}, salt};
            }
            default: return proto::respond_to_challenge(grp, victim, nonce, 0.1, w_.rng);
        }
    }

    const std::vector<proto::Credential<G>>& players() const { return players_; }
    const std::vector<PhysicalIdentity<G>>& old_pids() const { return old_pids_; }

private:
    void tamper(Mit<G>& mit, std::size_t i) {
        switch (i % 4) {
            case 0: mit.idp_sig.back() ^= 0x01; break;
            case 1: mit.M.push_back('!'); break;
            case 2: mit.T.flip(i % bio::code_bits); break;
            default: {
                // Well-formed token signed by a rogue IDP and absent from the ledger.
                auto rogue = idp_keygen(w_.grp, w_.rng);
                mit.idp_sig = idp_sign(w_.grp, rogue, mit_signed_bytes(w_.grp, mit));
            }
        }
    }

    World<G>& w_;
    std::vector<proto::Credential<G>> players_;
    std::vector<PhysicalIdentity<G>> old_pids_;
};

}  // namespace chamauth::testing

#endif
