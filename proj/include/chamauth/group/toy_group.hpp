#ifndef CHAMAUTH_GROUP_TOY_GROUP_HPP
#define CHAMAUTH_GROUP_TOY_GROUP_HPP

#include <bit>
#include <string>

#include "chamauth/group/params.hpp"
#include "chamauth/op_counter.hpp"

namespace chamauth {

namespace toy {

using u128 = unsigned __int128;

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t q) {
    return static_cast<std::uint64_t>(u128(a) * b % q);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t q) {
    std::uint64_t acc = 1 % q;
    a %= q;
    while (e) {
        if (e & 1) acc = mul_mod(acc, a, q);
        a = mul_mod(a, a, q);
        e >>= 1;
    }
    return acc;
}

/// Deterministic Miller-Rabin for 64-bit inputs.
inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        std::uint64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

/// Integer modulo the toy order q.
struct Scalar {
    std::uint64_t v = 0;
    std::uint64_t q = 0;

    bool is_zero() const { return v == 0; }
    friend bool operator==(const Scalar& a, const Scalar& b) { return a.v == b.v && a.q == b.q; }
    friend Scalar operator+(const Scalar& a, const Scalar& b) { return {static_cast<std::uint64_t>((u128(a.v) + b.v) % a.q), a.q}; }
    friend Scalar operator-(const Scalar& a, const Scalar& b) { return {static_cast<std::uint64_t>((u128(a.v) + a.q - b.v) % a.q), a.q}; }
    friend Scalar operator*(const Scalar& a, const Scalar& b) { return {mul_mod(a.v, b.v, a.q), a.q}; }
    Scalar operator-() const { return {(q - v) % q, q}; }
    Scalar inverse() const { return {pow_mod(v, q - 2, q), q}; }
};

/// Group element represented by its discrete logarithm; Tag keeps the three
/// groups distinct at the type level.
template <int Tag>
struct Element {
    std::uint64_t v = 0;
    bool is_identity() const { return v == 0; }
    friend bool operator==(const Element&, const Element&) = default;
};

}  // namespace toy

/// Exponent-arithmetic oracle backend: every group is Z_q written additively
/// in the exponent. Group multiplication is addition, exponentiation is
/// multiplication, and the pairing is the product mod q. It is insecure by
/// construction and exists to check the scheme's equations by hand.
class ToyGroup {
public:
    using Scalar = toy::Scalar;
    using G1 = toy::Element<1>;
    using G2 = toy::Element<2>;
    using GT = toy::Element<3>;

    static constexpr std::string_view backend_name = "toy";

    /// q must be a prime below 2^63.
    static ToyGroup setup(std::uint64_t q) {
        if (q < 3 || q >= (1ULL << 63) || !toy::is_prime(q))
            throw Error(ErrorCode::unsupported_level, "toy order must be an odd prime below 2^63, got " + std::to_string(q));
        return ToyGroup(q);
    }

    const SystemParams& params() const { return params_; }
    std::uint64_t order() const { return q_; }

    G1 g1() const { return {1}; }
    G2 g2() const { return {1}; }
    G1 g1_identity() const { return {0}; }

    G1 element_g1(std::uint64_t v) const { return {v % q_}; }
    G2 element_g2(std::uint64_t v) const { return {v % q_}; }

    G1 mul(const G1& a, const G1& b) const {
        record_op(Op::m1);
        return {add(a.v, b.v)};
    }
    G1 div(const G1& a, const G1& b) const {
        record_op(Op::m1);
        return {add(a.v, q_ - b.v)};
    }
    G1 pow(const G1& a, const Scalar& s) const {
        record_op(Op::e1);
        return {toy::mul_mod(a.v, s.v, q_)};
    }
    G2 pow(const G2& a, const Scalar& s) const {
        record_op(Op::e2);
        return {toy::mul_mod(a.v, s.v, q_)};
    }
    GT pow(const GT& a, const Scalar& s) const {
        record_op(Op::et);
        return {toy::mul_mod(a.v, s.v, q_)};
    }
    GT pair(const G1& a, const G2& b) const {
        record_op(Op::pairing);
        return {toy::mul_mod(a.v, b.v, q_)};
    }

    /// (SHA-256(message) mod (q - 1)) + 1, so never the identity.
    G1 hash_to_g1(ByteView message) const {
        auto d = sha256(message);
        std::uint64_t m = q_ - 1;
        u128 acc = 0;
        for (auto b : d) acc = ((acc << 8) | b) % m;
        return {static_cast<std::uint64_t>(acc) + 1};
    }

    bool is_identity(const G1& a) const { return a.is_identity(); }
    bool is_identity(const G2& a) const { return a.is_identity(); }

    std::size_t g1_size() const { return 8; }
    std::size_t g2_size() const { return 8; }

    template <int Tag>
    Bytes encode(const toy::Element<Tag>& a) const {
        Bytes out;
        append_u64(out, a.v);
        return out;
    }

    G1 decode_g1(ByteView in) const { return {decode_value(in)}; }
    G2 decode_g2(ByteView in) const { return {decode_value(in)}; }

    Scalar random_scalar(Rng& rng) const { return {1 + rng.below(q_ - 1), q_}; }
    Scalar scalar_from_u64(std::uint64_t v) const { return {v % q_, q_}; }
    Scalar scalar_from_bytes(ByteView be) const {
        u128 acc = 0;
        for (auto b : be) acc = ((acc << 8) | b) % q_;
        return {static_cast<std::uint64_t>(acc), q_};
    }
    Bytes encode_scalar(const Scalar& s) const {
        Bytes out(24, 0);
        append_u64(out, s.v);
        return out;
    }
    Scalar decode_scalar(ByteView in) const {
        if (in.size() != 32) throw Error(ErrorCode::invalid_encoding, "scalar must be 32 bytes");
        return scalar_from_bytes(in);
    }

private:
    using u128 = toy::u128;

    explicit ToyGroup(std::uint64_t q) : q_(q) {
        params_.group_id = "toy-" + std::to_string(q);
        params_.backend = std::string(backend_name);
        Bytes be;
        append_u64(be, q);
        params_.order_hex = to_hex(be);
        params_.security_bits = static_cast<unsigned>(std::bit_width(q) - 1);
        params_.hash_dst = "SHA-256 mod (q-1) + 1";
    }

    std::uint64_t add(std::uint64_t a, std::uint64_t b) const { return static_cast<std::uint64_t>((u128(a) + b) % q_); }

    std::uint64_t decode_value(ByteView in) const {
        if (in.size() != 8) throw Error(ErrorCode::invalid_encoding, "toy element must be 8 bytes");
        ByteReader r(in);
        auto v = r.u64();
        if (v >= q_) throw Error(ErrorCode::invalid_encoding, "toy element out of range");
        return v;
    }

    std::uint64_t q_;
    SystemParams params_;
};

}  // namespace chamauth

#endif
