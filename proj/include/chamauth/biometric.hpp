#ifndef CHAMAUTH_BIOMETRIC_HPP
#define CHAMAUTH_BIOMETRIC_HPP

#include <algorithm>
#include <bitset>
#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "chamauth/common.hpp"
#include "chamauth/crypto.hpp"

/// Synthetic iris codes: 2048-bit vectors compared by fractional Hamming
/// distance, with a challenge watermark written into PRF-selected bits.
namespace chamauth::bio {

inline constexpr std::size_t code_bits = 2048;
inline constexpr std::size_t code_bytes = code_bits / 8;
inline constexpr std::size_t watermark_bits = 128;
inline constexpr std::size_t nonce_bytes = watermark_bits / 8;
inline constexpr std::size_t salt_bytes = 16;
inline constexpr double default_threshold = 0.32;
inline constexpr double default_noise = 0.10;

using Code = std::bitset<code_bits>;
using Nonce = std::array<std::uint8_t, nonce_bytes>;

struct BioTemplate {
    Code code;
    std::string subject_id;
};

struct BioFeature {
    Code code;
    bool watermark_present = false;
};

struct Challenge {
    Nonce nonce{};
    std::chrono::steady_clock::time_point issued_at{};
};

inline Challenge fresh_challenge(Rng& rng, std::chrono::steady_clock::time_point now = std::chrono::steady_clock::now()) {
    Challenge c;
    rng.fill(c.nonce);
    c.issued_at = now;
    return c;
}

// Bit i of a code is bit (7 - i % 8) of byte i / 8, i.e. MSB first.

inline Code code_from_bytes(ByteView in) {
    if (in.size() != code_bytes) throw Error(ErrorCode::length_mismatch, "iris code must be 256 bytes");
    Code c;
    for (std::size_t i = 0; i < code_bits; ++i) c[i] = (in[i / 8] >> (7 - i % 8)) & 1;
    return c;
}

inline std::array<std::uint8_t, code_bytes> code_to_bytes(const Code& c) {
    std::array<std::uint8_t, code_bytes> out{};
    for (std::size_t i = 0; i < code_bits; ++i)
        if (c[i]) out[i / 8] |= static_cast<std::uint8_t>(0x80 >> (i % 8));
    return out;
}

/// Template/feature file body: 4-byte big-endian byte count (always 256),
/// then the code bytes.
inline Bytes encode_code(const Code& c) {
    Bytes out;
    append_field(out, code_to_bytes(c));
    return out;
}

inline Code decode_code(ByteView in) {
    ByteReader r(in);
    auto body = r.field();
    r.expect_done();
    return code_from_bytes(body);
}

/// Uniform 2048-bit template, reproducible from the seed.
inline BioTemplate gen_template(std::uint64_t seed, std::string subject_id = {}) {
    auto rng = Rng::seeded(seed);
    std::array<std::uint8_t, code_bytes> raw{};
    rng.fill(raw);
    if (subject_id.empty()) subject_id = "subject-" + std::to_string(seed);
    return {code_from_bytes(raw), std::move(subject_id)};
}

inline BioTemplate random_template(Rng& rng, std::string subject_id = {}) {
    std::array<std::uint8_t, code_bytes> raw{};
    rng.fill(raw);
    return {code_from_bytes(raw), std::move(subject_id)};
}

/// Fresh sample: each bit flipped independently with probability noise_rate.
inline BioFeature capture(const BioTemplate& tmpl, double noise_rate, Rng& rng) {
    if (!(noise_rate >= 0.0 && noise_rate < 0.5))
        throw Error(ErrorCode::invalid_argument, "noise rate must lie in [0, 0.5)");
    BioFeature f{tmpl.code, false};
    if (noise_rate == 0.0) return f;
    for (std::size_t i = 0; i < code_bits; ++i)
        if (rng.uniform() < noise_rate) f.code.flip(i);
    return f;
}

inline double fractional_hamming_distance(const Code& a, const Code& b) {
    return static_cast<double>((a ^ b).count()) / static_cast<double>(code_bits);
}

/// 128 distinct positions in [0, 2048), in embedding order. Drawn from
/// HMAC-SHA256(salt, "CHAMAUTH-WM-v1" || counter) as 16-bit words mod 2048.
inline std::vector<std::uint16_t> watermark_positions(ByteView salt) {
    std::vector<std::uint16_t> out;
    out.reserve(watermark_bits);
    std::bitset<code_bits> taken;
    for (std::uint32_t counter = 0; out.size() < watermark_bits; ++counter) {
        Bytes msg = to_bytes("CHAMAUTH-WM-v1");
        append_u32(msg, counter);
        auto block = hmac_sha256(salt, msg);
        for (std::size_t i = 0; i + 1 < block.size() && out.size() < watermark_bits; i += 2) {
            auto pos = static_cast<std::uint16_t>(((block[i] << 8) | block[i + 1]) % code_bits);
            if (taken[pos]) continue;
            taken.set(pos);
            out.push_back(pos);
        }
    }
    return out;
}

inline bool nonce_bit(const Nonce& n, std::size_t j) { return (n[j / 8] >> (7 - j % 8)) & 1; }

inline BioFeature embed_watermark(const BioFeature& feature, const Nonce& nonce, ByteView salt) {
    if (feature.watermark_present) throw Error(ErrorCode::watermark_state, "feature already carries a watermark");
    BioFeature out{feature.code, true};
    auto pos = watermark_positions(salt);
    for (std::size_t j = 0; j < watermark_bits; ++j) out.code[pos[j]] = nonce_bit(nonce, j);
    return out;
}

inline BioFeature embed_watermark(const BioFeature& feature, const Challenge& challenge, ByteView salt) {
    return embed_watermark(feature, challenge.nonce, salt);
}

inline Nonce extract_watermark(const BioFeature& feature, ByteView salt) {
    if (!feature.watermark_present) throw Error(ErrorCode::watermark_state, "feature carries no watermark");
    Nonce n{};
    auto pos = watermark_positions(salt);
    for (std::size_t j = 0; j < watermark_bits; ++j)
        if (feature.code[pos[j]]) n[j / 8] |= static_cast<std::uint8_t>(0x80 >> (j % 8));
    return n;
}

/// Accept iff the fractional Hamming distance is at most threshold.
inline bool match(const BioFeature& feature, const BioTemplate& tmpl, double threshold = default_threshold) {
    return fractional_hamming_distance(feature.code, tmpl.code) <= threshold;
}

/// Byte-level match for decoded payloads; rejects anything that is not a
/// full-length code.
inline bool match(ByteView feature_code, ByteView template_code, double threshold = default_threshold) {
    if (feature_code.size() != template_code.size())
        throw Error(ErrorCode::length_mismatch, "feature and template lengths differ");
    return fractional_hamming_distance(code_from_bytes(feature_code), code_from_bytes(template_code)) <= threshold;
}

/// Decision rates for one threshold.
struct ThresholdRates {
    double threshold = 0;
    double genuine_accept_native = 0;
    double genuine_accept_watermarked = 0;
    double impostor_accept_native = 0;
    double impostor_accept_watermarked = 0;
};

struct SimulationReport {
    std::size_t trials = 0;
    double noise = 0;
    double threshold = 0;
    double frr = 0;                // watermarked genuine samples rejected
    double far = 0;                // watermarked impostor samples accepted
    double frr_native = 0;
    double far_native = 0;
    std::size_t roundtrip_failures = 0;
    double max_gap = 0;            // largest |watermarked - native| over the sweep
    std::vector<ThresholdRates> sweep;
};

/// Genuine and impostor trials on synthetic codes. Each trial draws an
/// enrolled template, a genuine capture, an impostor capture and a random
/// challenge/salt; both captures are scored with and without the watermark.
inline SimulationReport simulate(std::size_t trials, double noise, double threshold, std::uint64_t seed,
                                 std::vector<double> sweep_thresholds = {0.20, 0.25, 0.30, 0.35, 0.40, 0.45}) {
    if (trials == 0) throw Error(ErrorCode::invalid_argument, "trials must be positive");
    if (!(threshold >= 0.0 && threshold <= 1.0)) throw Error(ErrorCode::invalid_argument, "threshold must lie in [0, 1]");
    auto rng = Rng::seeded(seed);
    struct Scores {
        double genuine_native, genuine_wm, impostor_native, impostor_wm;
    };
    std::vector<Scores> scores;
    scores.reserve(trials);
    SimulationReport rep;
    rep.trials = trials;
    rep.noise = noise;
    rep.threshold = threshold;
    for (std::size_t i = 0; i < trials; ++i) {
        auto enrolled = random_template(rng);
        auto other = random_template(rng);
        auto genuine = capture(enrolled, noise, rng);
        auto impostor = capture(other, noise, rng);
        Nonce nonce{};
        rng.fill(nonce);
        auto salt = rng.bytes(salt_bytes);
        auto genuine_wm = embed_watermark(genuine, nonce, salt);
        auto impostor_wm = embed_watermark(impostor, nonce, salt);
        if (extract_watermark(genuine_wm, salt) != nonce || extract_watermark(impostor_wm, salt) != nonce)
            ++rep.roundtrip_failures;
        scores.push_back({fractional_hamming_distance(genuine.code, enrolled.code),
                          fractional_hamming_distance(genuine_wm.code, enrolled.code),
                          fractional_hamming_distance(impostor.code, enrolled.code),
                          fractional_hamming_distance(impostor_wm.code, enrolled.code)});
    }
    auto rates_at = [&](double t) {
        ThresholdRates r{t, 0, 0, 0, 0};
        for (const auto& s : scores) {
            r.genuine_accept_native += s.genuine_native <= t;
            r.genuine_accept_watermarked += s.genuine_wm <= t;
            r.impostor_accept_native += s.impostor_native <= t;
            r.impostor_accept_watermarked += s.impostor_wm <= t;
        }
        auto n = static_cast<double>(trials);
        r.genuine_accept_native /= n;
        r.genuine_accept_watermarked /= n;
        r.impostor_accept_native /= n;
        r.impostor_accept_watermarked /= n;
        return r;
    };
    auto main = rates_at(threshold);
    rep.frr = 1.0 - main.genuine_accept_watermarked;
    rep.far = main.impostor_accept_watermarked;
    rep.frr_native = 1.0 - main.genuine_accept_native;
    rep.far_native = main.impostor_accept_native;
    for (double t : sweep_thresholds) {
        auto r = rates_at(t);
        rep.max_gap = std::max({rep.max_gap, std::abs(r.genuine_accept_watermarked - r.genuine_accept_native),
                                std::abs(r.impostor_accept_watermarked - r.impostor_accept_native)});
        rep.sweep.push_back(r);
    }
    return rep;
}

}  // namespace chamauth::bio

#endif
