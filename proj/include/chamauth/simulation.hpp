#ifndef CHAMAUTH_SIMULATION_HPP
#define CHAMAUTH_SIMULATION_HPP

#include "chamauth/protocol/session.hpp"

namespace chamauth {

/// Full player onboarding: key pair, registration with the IDP, and one VID.
template <PairingGroup G>
proto::Credential<G> enroll(Idp<G>& idp, ByteView real_id, ByteView anon_id, ByteView avatar_info,
                            bio::BioTemplate live, Rng& rng) {
    const G& grp = idp.group();
    auto kp = chameleon::keygen(grp, rng);
    auto mit = idp.register_player(real_id, anon_id, live, kp.pk, rng);
    auto vid = create_vid(grp, kp.sk, mit, avatar_info);
    return {std::move(mit), kp.sk, std::move(vid), std::move(live)};
}

/// enroll() with labels derived from a name and a random template.
template <PairingGroup G>
proto::Credential<G> enroll(Idp<G>& idp, const std::string& name, Rng& rng) {
    return enroll(idp, to_bytes("id:" + name), to_bytes("anon:" + name), to_bytes("avatar:" + name),
                  bio::random_template(rng, name), rng);
}

}  // namespace chamauth

#endif
