#include "adversary.hpp"
#include "support.hpp"

using namespace chamauth;
using namespace chamauth::testing;

template <class B>
class Tracing : public ::testing::Test {
protected:
    using G = typename B::Group;
    World<G> w{B::make()};
    static constexpr bool curve = std::is_same_v<B, CurveBackend>;

    TraceRequest<G> accepted_request(const proto::Credential<G>& who) {
        proto::OnePartyProver<G> p(w.grp, who, w.rng);
        proto::OnePartyVerifier<G> v(w.grp, w.anchor(), w.rng);
        proto::run_in_memory(p, v);
        EXPECT_EQ(v.status(), proto::Status::accepted);
        return trace_request_from(*v.retained(), "witness");
    }
};
TYPED_TEST_SUITE(Tracing, Backends, BackendNames);

TYPED_TEST(Tracing, AcceptedSessionDisclosesRealIdentity) {
    auto& w = this->w;
    auto alice = w.enroll("alice");
    w.enroll("bob");
    auto req = this->accepted_request(alice);
    auto v = trace(w.idp, req);
    EXPECT_EQ(v.reason, TraceReason::disclosed);
    EXPECT_EQ(v.disclosed, to_bytes("id:alice"));
}

TYPED_TEST(Tracing, BundleRoundTrip) {
    auto& w = this->w;
    auto req = this->accepted_request(w.enroll("alice"));
    auto enc = encode_trace_bundle(w.grp, req);
    auto back = decode_trace_bundle(w.grp, enc);
    EXPECT_EQ(encode_trace_bundle(w.grp, back), enc);
    EXPECT_EQ(back.reporter, "witness");
    EXPECT_EQ(trace(w.idp, back).reason, TraceReason::disclosed);
    enc.push_back(0);
    EXPECT_THROW(decode_trace_bundle(w.grp, enc), Error);
    auto other = proto::encode_frame({proto::MsgType::claim, {}, {}});
    EXPECT_THROW(decode_trace_bundle(w.grp, other), Error);
}

TYPED_TEST(Tracing, EveryFailureMapsToItsReason) {
    using G = typename TestFixture::G;
    auto& w = this->w;
    auto alice = w.enroll("alice");
    auto bob = w.enroll("bob");
    auto good = this->accepted_request(alice);

    auto r = good;
    r.mit.idp_sig.back() ^= 1;
    EXPECT_EQ(trace(w.idp, r).reason, TraceReason::bad_mit);

    r = good;
    r.vid = create_vid(w.grp, bob.sk, alice.mit, to_bytes("frame-up"));
    EXPECT_EQ(trace(w.idp, r).reason, TraceReason::bad_vid);

    r = good;
    r.challenge[0] ^= 1;
    EXPECT_EQ(trace(w.idp, r).reason, TraceReason::bad_freshness);

    r = good;
    r.pid.claim.check = chameleon::CheckParam<G>::make(w.grp, w.grp.pow(w.grp.g1(), w.grp.random_scalar(w.rng)));
    EXPECT_EQ(trace(w.idp, r).reason, TraceReason::bad_pid);

    // Fresh challenge spliced onto the old feature, original R' kept.
    r = good;
    auto nonce = bio::fresh_challenge(w.rng).nonce;
    auto salt = w.rng.bytes(bio::salt_bytes);
    auto spliced = bio::embed_watermark(bio::BioFeature{bio::decode_code(good.pid.claim.message), false}, nonce, salt);
    r.pid = {{bio::encode_code(spliced.code), good.pid.claim.check}, salt};
    r.challenge = nonce;
    EXPECT_EQ(trace(w.idp, r).reason, TraceReason::bad_pid);

    r = good;
    r.pid = {{bio::encode_code(bio::embed_watermark(bio::capture(bob.live, 0.1, w.rng), r.challenge, salt).code),
              good.pid.claim.check},
             salt};
    r.pid.claim.check = chameleon::sign(w.grp, alice.sk, alice.mit.h, r.pid.claim.message);
    EXPECT_EQ(trace(w.idp, r).reason, TraceReason::bad_biometric);

    // Valid everywhere but unknown to this registry.
    Registry empty;
    Idp<G> forgetful(w.grp, w.key, w.ledger, empty);
    auto v = trace(forgetful, good);
    EXPECT_EQ(v.reason, TraceReason::unregistered);
    EXPECT_FALSE(v.disclosed);
}

TYPED_TEST(Tracing, NoFramingWithoutTrapdoor) {
    auto& w = this->w;
    AttackLab lab(w, 5);
    const std::size_t n = this->curve ? 15 : 600;
    std::size_t disclosed = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& victim = lab.players()[i % 5];
        const auto& other = lab.players()[(i + 1) % 5];
        auto nonce = bio::fresh_challenge(w.rng).nonce;
        Attack attack = (i % 3 == 0) ? Attack::random_r : (i % 3 == 1) ? Attack::spliced_feature : Attack::cross_key_r;
        auto pid = lab.forge_pid(attack, victim, other, lab.old_pids()[i % 5], nonce);
        TraceRequest<typename TestFixture::G> req{victim.mit, victim.vid, pid, nonce, "whistleblower"};
        disclosed += trace(w.idp, req).reason == TraceReason::disclosed;
    }
    EXPECT_EQ(disclosed, 0u);
}
