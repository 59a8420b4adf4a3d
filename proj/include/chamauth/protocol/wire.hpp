#ifndef CHAMAUTH_PROTOCOL_WIRE_HPP
#define CHAMAUTH_PROTOCOL_WIRE_HPP

#include <string>

#include "chamauth/common.hpp"

/// Frame layout: len(4, BE) | msg_type(1) | session_id(16) | body, where len
/// counts everything after the length field.
namespace chamauth::proto {

enum class MsgType : std::uint8_t {
    claim = 1,
    challenge = 2,
    response = 3,
    counter_claim = 4,
    response_with_challenge = 5,
    response_with_key_share = 6,
    abort = 7,
    accept = 8,
    key_confirm = 9,
    retained_bundle = 16,
};

/// One byte on the wire; identifies the failed verifier step.
enum class AbortReason : std::uint8_t {
    bad_mit = 1,          // (a) IDP signature or ledger presence
    bad_vid = 2,          // (b) virtual identity collision
    bad_freshness = 3,    // (d) extracted challenge != issued challenge, or reused
    bad_biometric = 4,    // (e) feature does not match T
    bad_pid = 5,          // (f) physical identity collision
    timeout = 6,
    phase_violation = 7,
    malformed = 8,
    key_confirm_failed = 9,
};

inline std::string_view to_string(MsgType t) {
    switch (t) {
        case MsgType::claim: return "Claim";
        case MsgType::challenge: return "ChallengeMsg";
        case MsgType::response: return "Response";
        case MsgType::counter_claim: return "CounterClaim";
        case MsgType::response_with_challenge: return "ResponseWithChallenge";
        case MsgType::response_with_key_share: return "ResponseWithKeyShare";
        case MsgType::abort: return "Abort";
        case MsgType::accept: return "Accept";
        case MsgType::key_confirm: return "KeyConfirm";
        case MsgType::retained_bundle: return "RetainedBundle";
    }
    return "Unknown";
}

inline std::string_view to_string(AbortReason r) {
    switch (r) {
        case AbortReason::bad_mit: return "BadMIT";
        case AbortReason::bad_vid: return "BadVID";
        case AbortReason::bad_freshness: return "BadFreshness";
        case AbortReason::bad_biometric: return "BadBiometric";
        case AbortReason::bad_pid: return "BadPID";
        case AbortReason::timeout: return "Timeout";
        case AbortReason::phase_violation: return "PhaseViolation";
        case AbortReason::malformed: return "Malformed";
        case AbortReason::key_confirm_failed: return "KeyConfirmFailed";
    }
    return "Unknown";
}

inline bool is_known(MsgType t) {
    auto v = static_cast<std::uint8_t>(t);
    return (v >= 1 && v <= 9) || v == 16;
}

inline bool is_known(AbortReason r) {
    auto v = static_cast<std::uint8_t>(r);
    return v >= 1 && v <= 9;
}

using SessionId = std::array<std::uint8_t, 16>;

inline constexpr std::size_t frame_header_size = 4 + 1 + 16;
inline constexpr std::size_t max_frame_size = 1 << 20;

struct Frame {
    MsgType type{};
    SessionId session{};
    Bytes body;
};

inline Bytes encode_frame(const Frame& f) {
    Bytes out;
    out.reserve(frame_header_size + f.body.size());
    append_u32(out, static_cast<std::uint32_t>(1 + f.session.size() + f.body.size()));
    out.push_back(static_cast<std::uint8_t>(f.type));
    append(out, f.session);
    append(out, f.body);
    return out;
}

/// Decodes exactly one complete frame.
inline Frame decode_frame(ByteView in) {
    ByteReader r(in);
    auto len = r.u32();
    if (len < 17 || len > max_frame_size || len != r.remaining())
        throw Error(ErrorCode::invalid_encoding, "frame length mismatch");
    Frame f;
    f.type = static_cast<MsgType>(r.u8());
    if (!is_known(f.type)) throw Error(ErrorCode::invalid_encoding, "unknown message type");
    auto sid = r.take(16);
    std::copy(sid.begin(), sid.end(), f.session.begin());
    auto body = r.take(r.remaining());
    f.body.assign(body.begin(), body.end());
    return f;
}

}  // namespace chamauth::proto

#endif
