#ifndef CHAMAUTH_TRACING_HPP
#define CHAMAUTH_TRACING_HPP

#include "chamauth/protocol/session.hpp"

/// Virtual-physical tracing: a reporter hands the IDP the parameters a
/// verifier retained; the IDP re-runs every verifier check and, only if all
/// of them pass, discloses the registered real identity.
namespace chamauth {

enum class TraceReason { disclosed, bad_mit, bad_vid, bad_freshness, bad_biometric, bad_pid, unregistered };

inline std::string_view to_string(TraceReason r) {
    switch (r) {
        case TraceReason::disclosed: return "Disclosed";
        case TraceReason::bad_mit: return "BadMIT";
        case TraceReason::bad_vid: return "BadVID";
        case TraceReason::bad_freshness: return "BadFreshness";
        case TraceReason::bad_biometric: return "BadBiometric";
        case TraceReason::bad_pid: return "BadPID";
        case TraceReason::unregistered: return "Unregistered";
    }
    return "?";
}

struct TraceVerdict {
    TraceReason reason = TraceReason::unregistered;
    std::optional<Bytes> disclosed;
};

template <PairingGroup G>
struct TraceRequest {
    Mit<G> mit;
    VirtualIdentity<G> vid;
    PhysicalIdentity<G> pid;  // carries the watermark salt
    bio::Nonce challenge{};
    std::string reporter;
};

template <PairingGroup G>
TraceRequest<G> trace_request_from(const proto::Retained<G>& r, std::string reporter) {
    return {r.mit, r.vid, r.pid, r.challenge, std::move(reporter)};
}

/// Bundle file: one RetainedBundle frame whose body is
/// len(MIT) | MIT | VID | PID | challenge(16) | len(reporter) | reporter.
template <PairingGroup G>
Bytes encode_trace_bundle(const G& grp, const TraceRequest<G>& req, const proto::SessionId& sid = {}) {
    Bytes body;
    append_field(body, encode_mit(grp, req.mit));
    write_vid(grp, body, req.vid);
    write_pid(grp, body, req.pid);
    append(body, req.challenge);
    append_field(body, to_bytes(req.reporter));
    return proto::encode_frame({proto::MsgType::retained_bundle, sid, std::move(body)});
}

template <PairingGroup G>
TraceRequest<G> decode_trace_bundle(const G& grp, ByteView in) {
    auto f = proto::decode_frame(in);
    if (f.type != proto::MsgType::retained_bundle) throw Error(ErrorCode::invalid_encoding, "not a trace bundle");
    ByteReader r(f.body);
    auto mit = decode_mit(grp, r.field());
    auto vid = read_vid(grp, r);
    auto pid = read_pid(grp, r);
    auto challenge = proto::read_nonce(r);
    auto reporter = r.field();
    r.expect_done();
    return {std::move(mit), std::move(vid), std::move(pid), challenge, std::string(reporter.begin(), reporter.end())};
}

/// Checks run in verifier order; the first failure is the verdict.
template <PairingGroup G>
TraceVerdict trace(const Idp<G>& idp, const TraceRequest<G>& req, double threshold = bio::default_threshold) {
    const G& grp = idp.group();
    TrustAnchor<G> anchor{idp.verification_key(), &idp.ledger()};
    if (!check_mit(grp, anchor, req.mit)) return {TraceReason::bad_mit, std::nullopt};
    if (!claim_matches_mit(grp, req.mit, req.vid.claim)) return {TraceReason::bad_vid, std::nullopt};
    if (auto bad = check_pid(grp, req.mit, req.pid, req.challenge, threshold)) {
        switch (*bad) {
            case proto::AbortReason::bad_freshness: return {TraceReason::bad_freshness, std::nullopt};
            case proto::AbortReason::bad_biometric: return {TraceReason::bad_biometric, std::nullopt};
            default: return {TraceReason::bad_pid, std::nullopt};
        }
    }
    auto real_id = idp.real_identity(mit_digest(grp, req.mit));
    if (!real_id) return {TraceReason::unregistered, std::nullopt};
    return {TraceReason::disclosed, std::move(real_id)};
}

}  // namespace chamauth

#endif
