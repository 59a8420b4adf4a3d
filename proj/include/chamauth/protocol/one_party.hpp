#ifndef CHAMAUTH_PROTOCOL_ONE_PARTY_HPP
#define CHAMAUTH_PROTOCOL_ONE_PARTY_HPP

#include "chamauth/protocol/session.hpp"

/// One-party authentication:
///   P -> V  Claim(MIT, VID)          V checks (a) MIT, (b) VID
///   V -> P  ChallengeMsg(C)          (c) fresh 128-bit nonce
///   P -> V  Response(PID)            V checks (d) nonce, (e) match, (f) PID
///   V -> P  Accept
/// After acceptance the verifier may issue further challenges at any time.
namespace chamauth::proto {

template <PairingGroup G>
class OnePartyProver : public SessionCore {
public:
    enum class Phase { idle, await_challenge, await_verdict, accepted, aborted };

    OnePartyProver(const G& grp, Credential<G> cred, Rng& rng, SessionConfig cfg = {})
        : grp_(grp), cred_(std::move(cred)), rng_(rng), cfg_(std::move(cfg)) {}

    std::vector<Bytes> start() override {
        SessionId sid{};
        rng_.fill(sid);
        set_session(sid);
        phase_ = Phase::await_challenge;
        return {emit(MsgType::claim, encode_claim_body(grp_, cred_.mit, cred_.vid))};
    }

    std::vector<Bytes> on_frame(ByteView raw) override {
        std::vector<Bytes> out;
        if (phase_ == Phase::accepted) status_ = Status::running;  // re-challenge window
        auto f = admit(raw, out);
        if (!f) return finish(out);
        switch (phase_) {
            case Phase::await_challenge:
            case Phase::accepted:
                if (f->type != MsgType::challenge) break;
                try {
                    ByteReader r(f->body);
                    auto nonce = read_nonce(r);
                    r.expect_done();
                    last_pid_ = respond_to_challenge(grp_, cred_, nonce, cfg_.capture_noise, rng_);
                } catch (const Error&) {
                    out.push_back(fail(AbortReason::malformed));
                    return finish(out);
                }
                {
                    Bytes body;
                    write_pid(grp_, body, *last_pid_);
                    out.push_back(emit(MsgType::response, std::move(body)));
                }
                phase_ = Phase::await_verdict;
                return out;
            case Phase::await_verdict:
                if (f->type != MsgType::accept || !f->body.empty()) break;
                phase_ = Phase::accepted;
                status_ = Status::accepted;
                return out;
            default: break;
        }
        out.push_back(fail(AbortReason::phase_violation));
        return finish(out);
    }

    Phase phase() const { return phase_; }
    const std::optional<PhysicalIdentity<G>>& last_pid() const { return last_pid_; }

private:
    std::vector<Bytes> finish(std::vector<Bytes>& out) {
        if (status_ == Status::aborted) phase_ = Phase::aborted;
        return std::move(out);
    }

    G grp_;
    Credential<G> cred_;
    Rng& rng_;
    SessionConfig cfg_;
    Phase phase_ = Phase::idle;
    std::optional<PhysicalIdentity<G>> last_pid_;
};

template <PairingGroup G>
class OnePartyVerifier : public SessionCore {
public:
    enum class Phase { await_claim, await_response, accepted, aborted };

    OnePartyVerifier(const G& grp, TrustAnchor<G> anchor, Rng& rng, SessionConfig cfg = {})
        : grp_(grp), anchor_(std::move(anchor)), rng_(rng), cfg_(std::move(cfg)) {}

    std::vector<Bytes> on_frame(ByteView raw) override {
        std::vector<Bytes> out;
        auto f = admit(raw, out, /*adopt_session=*/true);
        if (!f) return finish(out);
        CountScope scope;
        if (phase_ == Phase::await_claim && f->type == MsgType::claim) {
            handle_claim(*f, out);
        } else if (phase_ == Phase::await_response && f->type == MsgType::response) {
            handle_response(*f, out);
        } else {
            out.push_back(fail(AbortReason::phase_violation));
        }
        cost_ += scope.counts();
        return finish(out);
    }

    /// Issues a new challenge to an already accepted prover.
    Bytes rechallenge() {
        if (phase_ != Phase::accepted) throw Error(ErrorCode::phase_violation, "re-challenge requires an accepted session");
        phase_ = Phase::await_response;
        status_ = Status::running;
        auto c = book_.issue(rng_, cfg_.clock());
        return emit(MsgType::challenge, Bytes(c.nonce.begin(), c.nonce.end()));
    }

    Phase phase() const { return phase_; }
    /// The (MIT, VID, PID, challenge) of the last accepted response.
    const std::optional<Retained<G>>& retained() const { return retained_; }
    /// Group operations spent by this side so far.
    OpCounts cost() const { return cost_; }
    std::size_t accepted_responses() const { return accepted_count_; }

private:
    void handle_claim(const Frame& f, std::vector<Bytes>& out) {
        try {
            ByteReader r(f.body);
            auto [mit, vid] = read_claim(grp_, r);
            r.expect_done();
            mit_ = std::move(mit);
            vid_ = std::move(vid);
        } catch (const Error&) {
            out.push_back(fail(AbortReason::malformed));
            return;
        }
        if (!check_mit(grp_, anchor_, *mit_)) {
            out.push_back(fail(AbortReason::bad_mit));
            return;
        }
        if (!claim_matches_mit(grp_, *mit_, vid_->claim)) {
            out.push_back(fail(AbortReason::bad_vid));
            return;
        }
        auto c = book_.issue(rng_, cfg_.clock());
        out.push_back(emit(MsgType::challenge, Bytes(c.nonce.begin(), c.nonce.end())));
        phase_ = Phase::await_response;
    }

    void handle_response(const Frame& f, std::vector<Bytes>& out) {
        std::optional<PhysicalIdentity<G>> pid;
        try {
            ByteReader r(f.body);
            pid = read_pid(grp_, r);
            r.expect_done();
        } catch (const Error&) {
            out.push_back(fail(AbortReason::malformed));
            return;
        }
        if (book_.expired(cfg_.clock(), cfg_.challenge_window)) {
            book_.drop();
            out.push_back(fail(AbortReason::timeout));
            return;
        }
        auto expected = book_.pending_nonce();
        if (auto bad = check_pid(grp_, *mit_, *pid, expected, cfg_.threshold)) {
            if (*bad != AbortReason::bad_freshness) book_.consume();
            out.push_back(fail(*bad));
            return;
        }
        book_.consume();
        retained_ = Retained<G>{*mit_, *vid_, std::move(*pid), expected};
        ++accepted_count_;
        out.push_back(emit(MsgType::accept, {}));
        phase_ = Phase::accepted;
        status_ = Status::accepted;
    }

    std::vector<Bytes> finish(std::vector<Bytes>& out) {
        if (status_ == Status::aborted) phase_ = Phase::aborted;
        return std::move(out);
    }

    G grp_;
    TrustAnchor<G> anchor_;
    Rng& rng_;
    SessionConfig cfg_;
    Phase phase_ = Phase::await_claim;
    ChallengeBook book_;
    std::optional<Mit<G>> mit_;
    std::optional<VirtualIdentity<G>> vid_;
    std::optional<Retained<G>> retained_;
    OpCounts cost_;
    std::size_t accepted_count_ = 0;
};

}  // namespace chamauth::proto

#endif
