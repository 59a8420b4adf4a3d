#ifndef CHAMAUTH_PROTOCOL_TWO_PARTY_HPP
#define CHAMAUTH_PROTOCOL_TWO_PARTY_HPP

#include "chamauth/protocol/session.hpp"

/// Two-party mutual authentication with key agreement:
///   (1) A -> B  Claim(MIT_a, VID_a)
///   (2) B -> A  CounterClaim(MIT_b, VID_b, C_a)           B checked A's VID
///   (3) A -> B  ResponseWithChallenge(PID_a, C_b)         A checked B's VID
///   (4) B -> A  ResponseWithKeyShare(PID_b, g1^w)         B checked A's PID
///   (5) A -> B  KeyConfirm(mac_A)                         A checked B's PID, K = (g1^w)^(1/x_a)
///   (6) B -> A  KeyConfirm(mac_B)                         B: K = y_a^w
/// session key = HKDF(enc(K) || SHA-256(frames 1..4), "CHAMAUTH-SK-v1"), 32 bytes;
/// mac_X = HMAC(session key, "CHAMAUTH-KC-v1" || X || SHA-256(frames 1..4)).
namespace chamauth::proto {

enum class CostPhase { round1, round2, session };

inline std::string_view to_string(CostPhase p) {
    switch (p) {
        case CostPhase::round1: return "Round 1";
        case CostPhase::round2: return "Round 2";
        case CostPhase::session: return "Session Key Establishment";
    }
    return "?";
}

using PhaseCosts = std::map<CostPhase, OpCounts>;

inline OpCounts total(const PhaseCosts& costs) {
    OpCounts t;
    for (const auto& [_, c] : costs) t += c;
    return t;
}

namespace detail {
inline constexpr std::string_view session_key_info = "CHAMAUTH-SK-v1";
inline constexpr std::string_view key_confirm_label = "CHAMAUTH-KC-v1";

inline Bytes derive_session_key(ByteView k_encoded, const Digest& transcript) {
    Bytes ikm(k_encoded.begin(), k_encoded.end());
    append(ikm, transcript);
    return hkdf_sha256(ikm, {}, to_bytes(session_key_info), 32);
}

inline Digest confirm_mac(ByteView key, char role, const Digest& transcript) {
    Bytes msg = to_bytes(key_confirm_label);
    msg.push_back(static_cast<std::uint8_t>(role));
    append(msg, transcript);
    return hmac_sha256(key, msg);
}
}  // namespace detail

/// State shared by both roles: the established key is only exposed once the
/// peer's key confirmation has been checked.
template <PairingGroup G>
class TwoPartyBase : public SessionCore {
public:
    const PhaseCosts& costs() const { return costs_; }
    std::optional<Bytes> session_key() const {
        if (status_ != Status::accepted) return std::nullopt;
        return key_;
    }
    /// The agreed group element K (for fixtures); set once derived.
    const std::optional<typename G::G1>& shared_element() const { return k_; }
    const std::optional<Retained<G>>& retained() const { return retained_; }

protected:
    TwoPartyBase(const G& grp, Credential<G> cred, TrustAnchor<G> anchor, Rng& rng, SessionConfig cfg)
        : grp_(grp), cred_(std::move(cred)), anchor_(std::move(anchor)), rng_(rng), cfg_(std::move(cfg)) {}

    void establish_key(const typename G::G1& k) {
        k_ = k;
        transcript_hash_ = transcript_digest(transcript(), 4);
        key_ = detail::derive_session_key(grp_.encode(k), transcript_hash_);
    }

    Bytes my_confirm(char role) const {
        auto mac = detail::confirm_mac(key_, role, transcript_hash_);
        return Bytes(mac.begin(), mac.end());
    }

    bool peer_confirm_ok(const Frame& f, char peer_role) const {
        auto expect = detail::confirm_mac(key_, peer_role, transcript_hash_);
        return f.type == MsgType::key_confirm && constant_time_equal(f.body, expect);
    }

    /// Peer's (MIT, VID) checks, steps (a) and (b).
    std::optional<AbortReason> accept_peer_claim(Mit<G> mit, VirtualIdentity<G> vid) {
        if (!check_mit(grp_, anchor_, mit)) return AbortReason::bad_mit;
        if (!claim_matches_mit(grp_, mit, vid.claim)) return AbortReason::bad_vid;
        peer_mit_ = std::move(mit);
        peer_vid_ = std::move(vid);
        return std::nullopt;
    }

    /// Steps (d)-(f) on the peer's PID against the challenge we issued.
    std::optional<AbortReason> accept_peer_pid(PhysicalIdentity<G> pid) {
        if (book_.expired(cfg_.clock(), cfg_.challenge_window)) {
            book_.drop();
            return AbortReason::timeout;
        }
        auto expected = book_.pending_nonce();
        if (auto bad = check_pid(grp_, *peer_mit_, pid, expected, cfg_.threshold)) return bad;
        book_.consume();
        retained_ = Retained<G>{*peer_mit_, *peer_vid_, std::move(pid), expected};
        return std::nullopt;
    }

    G grp_;
    Credential<G> cred_;
    TrustAnchor<G> anchor_;
    Rng& rng_;
    SessionConfig cfg_;
    ChallengeBook book_;
    std::optional<Mit<G>> peer_mit_;
    std::optional<VirtualIdentity<G>> peer_vid_;
    std::optional<Retained<G>> retained_;
    PhaseCosts costs_{{CostPhase::round1, {}}, {CostPhase::round2, {}}, {CostPhase::session, {}}};
    std::optional<typename G::G1> k_;
    Digest transcript_hash_{};
    Bytes key_;
};

/// Avatar A.
template <PairingGroup G>
class TwoPartyInitiator : public TwoPartyBase<G> {
    using Base = TwoPartyBase<G>;

public:
    enum class Phase { idle, await_counter_claim, await_key_share, await_confirm, established, aborted };

    TwoPartyInitiator(const G& grp, Credential<G> cred, TrustAnchor<G> anchor, Rng& rng, SessionConfig cfg = {})
        : Base(grp, std::move(cred), std::move(anchor), rng, std::move(cfg)) {}

    std::vector<Bytes> start() override {
        SessionId sid{};
        this->rng_.fill(sid);
        this->set_session(sid);
        phase_ = Phase::await_counter_claim;
        return {this->emit(MsgType::claim, encode_claim_body(this->grp_, this->cred_.mit, this->cred_.vid))};
    }

    std::vector<Bytes> on_frame(ByteView raw) override {
        std::vector<Bytes> out;
        auto f = this->admit(raw, out);
        if (f) {
            if (phase_ == Phase::await_counter_claim && f->type == MsgType::counter_claim) {
                round2(*f, out);
            } else if (phase_ == Phase::await_key_share && f->type == MsgType::response_with_key_share) {
                session(*f, out);
            } else if (phase_ == Phase::await_confirm && f->type == MsgType::key_confirm) {
                if (this->peer_confirm_ok(*f, 'B')) {
                    phase_ = Phase::established;
                    this->status_ = Status::accepted;
                } else {
                    out.push_back(this->fail(AbortReason::key_confirm_failed));
                }
            } else {
                out.push_back(this->fail(AbortReason::phase_violation));
            }
        }
        if (this->status_ == Status::aborted) phase_ = Phase::aborted;
        return out;
    }

    Phase phase() const { return phase_; }

private:
    void round2(const Frame& f, std::vector<Bytes>& out) {
        CountScope scope;
        std::optional<Mit<G>> mit;
        std::optional<VirtualIdentity<G>> vid;
        bio::Nonce c_a{};
        try {
            ByteReader r(f.body);
            auto claim = read_claim(this->grp_, r);
            mit = std::move(claim.first);
            vid = std::move(claim.second);
            c_a = read_nonce(r);
            r.expect_done();
        } catch (const Error&) {
            out.push_back(this->fail(AbortReason::malformed));
            return;
        }
        if (auto bad = this->accept_peer_claim(std::move(*mit), std::move(*vid))) {
            this->costs_[CostPhase::round2] += scope.counts();
            out.push_back(this->fail(*bad));
            return;
        }
        auto pid = respond_to_challenge(this->grp_, this->cred_, c_a, this->cfg_.capture_noise, this->rng_);
        auto c_b = this->book_.issue(this->rng_, this->cfg_.clock());
        this->costs_[CostPhase::round2] += scope.counts();
        Bytes body;
        write_pid(this->grp_, body, pid);
        append(body, c_b.nonce);
        out.push_back(this->emit(MsgType::response_with_challenge, std::move(body)));
        phase_ = Phase::await_key_share;
    }

    void session(const Frame& f, std::vector<Bytes>& out) {
        CountScope scope;
        std::optional<PhysicalIdentity<G>> pid;
        std::optional<typename G::G1> gw;
        try {
            ByteReader r(f.body);
            pid = read_pid(this->grp_, r);
            gw = this->grp_.decode_g1(r.take(this->grp_.g1_size()));
            r.expect_done();
        } catch (const Error&) {
            out.push_back(this->fail(AbortReason::malformed));
            return;
        }
        if (this->grp_.is_identity(*gw)) {
            out.push_back(this->fail(AbortReason::malformed));
            return;
        }
        // PID_b is validated before any key material is derived.
        if (auto bad = this->accept_peer_pid(std::move(*pid))) {
            this->costs_[CostPhase::session] += scope.counts();
            out.push_back(this->fail(*bad));
            return;
        }
        auto k = this->grp_.pow(*gw, this->cred_.sk.inverse());
        this->costs_[CostPhase::session] += scope.counts();
        this->establish_key(k);
        out.push_back(this->emit(MsgType::key_confirm, this->my_confirm('A')));
        phase_ = Phase::await_confirm;
    }

    Phase phase_ = Phase::idle;
};

/// Avatar B.
template <PairingGroup G>
class TwoPartyResponder : public TwoPartyBase<G> {
    using Base = TwoPartyBase<G>;

public:
    enum class Phase { await_claim, await_response, await_confirm, established, aborted };

    /// fixed_w pins the key-share exponent (fixtures only).
    TwoPartyResponder(const G& grp, Credential<G> cred, TrustAnchor<G> anchor, Rng& rng, SessionConfig cfg = {},
                      std::optional<typename G::Scalar> fixed_w = std::nullopt)
        : Base(grp, std::move(cred), std::move(anchor), rng, std::move(cfg)), fixed_w_(std::move(fixed_w)) {}

    std::vector<Bytes> on_frame(ByteView raw) override {
        std::vector<Bytes> out;
        auto f = this->admit(raw, out, /*adopt_session=*/true);
        if (f) {
            if (phase_ == Phase::await_claim && f->type == MsgType::claim) {
                round1(*f, out);
            } else if (phase_ == Phase::await_response && f->type == MsgType::response_with_challenge) {
                round2(*f, out);
            } else if (phase_ == Phase::await_confirm && f->type == MsgType::key_confirm) {
                if (this->peer_confirm_ok(*f, 'A')) {
                    out.push_back(this->emit(MsgType::key_confirm, this->my_confirm('B')));
                    phase_ = Phase::established;
                    this->status_ = Status::accepted;
                } else {
                    out.push_back(this->fail(AbortReason::key_confirm_failed));
                }
            } else {
                out.push_back(this->fail(AbortReason::phase_violation));
            }
        }
        if (this->status_ == Status::aborted) phase_ = Phase::aborted;
        return out;
    }

    Phase phase() const { return phase_; }

private:
    void round1(const Frame& f, std::vector<Bytes>& out) {
        CountScope scope;
        std::optional<Mit<G>> mit;
        std::optional<VirtualIdentity<G>> vid;
        try {
            ByteReader r(f.body);
            auto claim = read_claim(this->grp_, r);
            mit = std::move(claim.first);
            vid = std::move(claim.second);
            r.expect_done();
        } catch (const Error&) {
            out.push_back(this->fail(AbortReason::malformed));
            return;
        }
        auto bad = this->accept_peer_claim(std::move(*mit), std::move(*vid));
        this->costs_[CostPhase::round1] += scope.counts();
        if (bad) {
            out.push_back(this->fail(*bad));
            return;
        }
        auto c_a = this->book_.issue(this->rng_, this->cfg_.clock());
        Bytes body = encode_claim_body(this->grp_, this->cred_.mit, this->cred_.vid);
        append(body, c_a.nonce);
        out.push_back(this->emit(MsgType::counter_claim, std::move(body)));
        phase_ = Phase::await_response;
    }

    void round2(const Frame& f, std::vector<Bytes>& out) {
        CountScope scope;
        std::optional<PhysicalIdentity<G>> pid;
        bio::Nonce c_b{};
        try {
            ByteReader r(f.body);
            pid = read_pid(this->grp_, r);
            c_b = read_nonce(r);
            r.expect_done();
        } catch (const Error&) {
            out.push_back(this->fail(AbortReason::malformed));
            return;
        }
        if (auto bad = this->accept_peer_pid(std::move(*pid))) {
            this->costs_[CostPhase::round2] += scope.counts();
            out.push_back(this->fail(*bad));
            return;
        }
        auto my_pid = respond_to_challenge(this->grp_, this->cred_, c_b, this->cfg_.capture_noise, this->rng_);
        auto w = fixed_w_ ? *fixed_w_ : this->grp_.random_scalar(this->rng_);
        auto gw = this->grp_.pow(this->grp_.g1(), w);
        this->costs_[CostPhase::round2] += scope.counts();
        Bytes body;
        write_pid(this->grp_, body, my_pid);
        append(body, this->grp_.encode(gw));
        out.push_back(this->emit(MsgType::response_with_key_share, std::move(body)));

        scope.reset();
        auto k = this->grp_.pow(this->peer_mit_->y.y1, w);
        this->costs_[CostPhase::session] += scope.counts();
        this->establish_key(k);
        phase_ = Phase::await_confirm;
    }

    std::optional<typename G::Scalar> fixed_w_;
    Phase phase_ = Phase::await_claim;
};

}  // namespace chamauth::proto

#endif
