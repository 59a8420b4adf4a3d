#ifndef CHAMAUTH_PROTOCOL_SESSION_HPP
#define CHAMAUTH_PROTOCOL_SESSION_HPP

#include <chrono>
#include <functional>
#include <map>

#include "chamauth/verifier.hpp"

namespace chamauth::proto {

using Clock = std::chrono::steady_clock;

struct SessionConfig {
    double capture_noise = bio::default_noise;
    double threshold = bio::default_threshold;
    std::chrono::milliseconds challenge_window{std::chrono::seconds(30)};
    std::function<Clock::time_point()> clock = [] { return Clock::now(); };
};

/// A player's long-term material: registered token, trapdoor, a ready VID
/// and the live biometric that fresh samples are drawn from.
template <PairingGroup G>
struct Credential {
    Mit<G> mit;
    typename G::Scalar sk;
    VirtualIdentity<G> vid;
    bio::BioTemplate live;
};

/// What a verifier keeps after accepting a peer; enough for tracing.
template <PairingGroup G>
struct Retained {
    Mit<G> mit;
    VirtualIdentity<G> vid;
    PhysicalIdentity<G> pid;
    bio::Nonce challenge{};
};

enum class Status { running, accepted, aborted };

/// Sans-IO protocol endpoint: feed it frames, send whatever it returns.
class Endpoint {
public:
    virtual ~Endpoint() = default;
    virtual std::vector<Bytes> start() { return {}; }
    virtual std::vector<Bytes> on_frame(ByteView frame) = 0;
    /// Called by a driver when the peer stays silent past its deadline.
    virtual std::vector<Bytes> on_timeout() = 0;
    virtual Status status() const = 0;
    bool done() const { return status() != Status::running; }
};

/// Bookkeeping shared by all roles: session id, transcript, abort handling.
class SessionCore : public Endpoint {
public:
    Status status() const override { return status_; }
    std::optional<AbortReason> abort_reason() const { return reason_; }
    /// True if the abort originated on this side.
    bool aborted_locally() const { return aborted_locally_; }
    const SessionId& session_id() const { return sid_; }
    /// Every frame sent or received, in order.
    const std::vector<Bytes>& transcript() const { return transcript_; }

    std::vector<Bytes> on_timeout() override {
        if (done()) return {};
        return {fail(AbortReason::timeout)};
    }

protected:
    Bytes emit(MsgType type, Bytes body) {
        auto frame = encode_frame({type, sid_, std::move(body)});
        transcript_.push_back(frame);
        return frame;
    }

    Bytes fail(AbortReason reason) {
        status_ = Status::aborted;
        reason_ = reason;
        aborted_locally_ = true;
        return emit(MsgType::abort, Bytes{static_cast<std::uint8_t>(reason)});
    }

    /// Decodes and records an incoming frame. Returns nullopt when the
    /// frame ended the session (peer abort, or a local abort that has
    /// already been queued in `out`).
    std::optional<Frame> admit(ByteView raw, std::vector<Bytes>& out, bool adopt_session = false) {
        if (done()) return std::nullopt;
        Frame f;
        try {
            f = decode_frame(raw);
        } catch (const Error&) {
            out.push_back(fail(AbortReason::malformed));
            return std::nullopt;
        }
        if (adopt_session && !sid_set_) {
            sid_ = f.session;
            sid_set_ = true;
        } else if (f.session != sid_) {
            out.push_back(fail(AbortReason::malformed));
            return std::nullopt;
        }
        transcript_.emplace_back(raw.begin(), raw.end());
        if (f.type == MsgType::abort) {
            status_ = Status::aborted;
            reason_ = (f.body.size() == 1 && is_known(static_cast<AbortReason>(f.body[0])))
                          ? static_cast<AbortReason>(f.body[0])
                          : AbortReason::malformed;
            return std::nullopt;
        }
        return f;
    }

    void set_session(const SessionId& sid) {
        sid_ = sid;
        sid_set_ = true;
    }

    Status status_ = Status::running;

private:
    SessionId sid_{};
    bool sid_set_ = false;
    std::optional<AbortReason> reason_;
    bool aborted_locally_ = false;
    std::vector<Bytes> transcript_;
};

/// Nonce bookkeeping for the side that issues challenges: one pending
/// challenge with a deadline, and every nonce ever consumed.
class ChallengeBook {
public:
    bio::Challenge issue(Rng& rng, Clock::time_point now) {
        for (;;) {
            auto c = bio::fresh_challenge(rng, now);
            if (!used_.count(c.nonce)) {
                pending_ = c;
                return c;
            }
        }
    }

    bool has_pending() const { return pending_.has_value(); }
    const bio::Nonce& pending_nonce() const { return pending_->nonce; }

    bool expired(Clock::time_point now, std::chrono::milliseconds window) const {
        return now > pending_->issued_at + window;
    }

    /// Clears the pending challenge; the nonce can never be accepted again.
    bio::Nonce consume() {
        auto n = pending_->nonce;
        used_.insert(n);
        pending_.reset();
        return n;
    }

    void drop() { pending_.reset(); }

private:
    std::optional<bio::Challenge> pending_;
    std::set<bio::Nonce> used_;
};

template <PairingGroup G>
Bytes encode_claim_body(const G& grp, const Mit<G>& mit, const VirtualIdentity<G>& vid) {
    Bytes out;
    append_field(out, encode_mit(grp, mit));
    write_vid(grp, out, vid);
    return out;
}

template <PairingGroup G>
std::pair<Mit<G>, VirtualIdentity<G>> read_claim(const G& grp, ByteReader& r) {
    auto mit = decode_mit(grp, r.field());
    auto vid = read_vid(grp, r);
    return {std::move(mit), std::move(vid)};
}

inline bio::Nonce read_nonce(ByteReader& r) {
    bio::Nonce n{};
    auto b = r.take(n.size());
    std::copy(b.begin(), b.end(), n.begin());
    return n;
}

/// Builds a PID for the given challenge. A fresh capture and salt are drawn
/// again in the (probability ~1/q) case that h / H(M') is the identity.
template <PairingGroup G>
PhysicalIdentity<G> respond_to_challenge(const G& grp, const Credential<G>& cred, const bio::Nonce& nonce,
                                         double noise, Rng& rng) {
    for (int attempt = 0;; ++attempt) {
        auto salt = rng.bytes(bio::salt_bytes);
        try {
            return create_pid(grp, cred.sk, cred.mit, cred.live, nonce, salt, noise, rng);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::degenerate_base || attempt >= 64) throw;
        }
    }
}

inline Digest transcript_digest(const std::vector<Bytes>& frames, std::size_t count) {
    Sha256 h;
    for (std::size_t i = 0; i < count && i < frames.size(); ++i) h.update(ByteView(frames[i]));
    return h.finish();
}

}  // namespace chamauth::proto

#endif
