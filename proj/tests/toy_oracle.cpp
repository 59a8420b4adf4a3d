// Standalone exponent-arithmetic oracle for the q = 13 fixtures. It shares no
// code with the library: plain integers, brute-force inverses, and libsodium
// only for SHA-256. Writes one JSON object per line.

#include <sodium.h>

#include <cstdint>
#include <cstdio>
#include <cstring>

namespace {

constexpr long q = 13;

long mod(long a) { return ((a % q) + q) % q; }

long inverse(long x) {
    for (long v = 1; v < q; ++v)
        if (mod(v * x) == 1) return v;
    return 0;
}

long hash_to_g1(const char* msg) {
    unsigned char d[crypto_hash_sha256_BYTES];
    crypto_hash_sha256(d, reinterpret_cast<const unsigned char*>(msg), std::strlen(msg));
    long r = 0;
    for (unsigned char b : d) r = (r * 256 + b) % (q - 1);
    return r + 1;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2 || sodium_init() < 0) return 2;
    FILE* out = std::fopen(argv[1], "w");
    if (!out) return 1;

    const long x = 3, y = inverse(x), m = 5, r = 2, m_new = 7, x_wrong = 5, w = 4;
    const long h = mod(m + r * y), R = mod(r);
    const long check_lhs = mod(h - m), check_rhs = mod(R * y);
    const long bad_R = 3, bad_rhs = mod(bad_R * y);
    const long R_new = mod((h - m_new) * x);
    const long sig_lhs = mod(h - m_new), sig_rhs = mod(R_new * y);
    const long R_wrong = mod((h - m_new) * x_wrong), wrong_rhs = mod(R_wrong * y);
    const long k_b = mod(y * w), k_a = mod(w * inverse(x));

    std::fprintf(out, "{\"name\":\"keypair\",\"q\":%ld,\"x\":%ld,\"y1\":%ld,\"y2\":%ld}\n", q, x, y, y);
    std::fprintf(out, "{\"name\":\"hash\",\"q\":%ld,\"x\":%ld,\"m\":%ld,\"r\":%ld,\"h\":%ld,\"R\":%ld}\n", q, x, m, r, h, R);
    std::fprintf(out, "{\"name\":\"check\",\"q\":%ld,\"y\":%ld,\"h\":%ld,\"m\":%ld,\"R\":%ld,\"lhs\":%ld,\"rhs\":%ld,\"valid\":%s}\n",
                 q, y, h, m, R, check_lhs, check_rhs, check_lhs == check_rhs ? "true" : "false");
    std::fprintf(out, "{\"name\":\"check_bad_r\",\"q\":%ld,\"y\":%ld,\"h\":%ld,\"m\":%ld,\"R\":%ld,\"lhs\":%ld,\"rhs\":%ld,\"valid\":%s}\n",
                 q, y, h, m, bad_R, check_lhs, bad_rhs, check_lhs == bad_rhs ? "true" : "false");
    std::fprintf(out, "{\"name\":\"sign\",\"q\":%ld,\"x\":%ld,\"h\":%ld,\"m_new\":%ld,\"R_new\":%ld,\"lhs\":%ld,\"rhs\":%ld,\"valid\":%s}\n",
                 q, x, h, m_new, R_new, sig_lhs, sig_rhs, sig_lhs == sig_rhs ? "true" : "false");
    std::fprintf(out, "{\"name\":\"sign_wrong_key\",\"q\":%ld,\"x\":%ld,\"h\":%ld,\"m_new\":%ld,\"R_new\":%ld,\"lhs\":%ld,\"rhs\":%ld,\"valid\":%s}\n",
                 q, x_wrong, h, m_new, R_wrong, sig_lhs, wrong_rhs, sig_lhs == wrong_rhs ? "true" : "false");
    std::fprintf(out, "{\"name\":\"pairing\",\"q\":%ld,\"a\":3,\"b\":4,\"e\":%ld}\n", q, mod(3 * 4));
    std::fprintf(out, "{\"name\":\"key_agreement\",\"q\":%ld,\"x\":%ld,\"w\":%ld,\"gw\":%ld,\"k_a\":%ld,\"k_b\":%ld}\n", q, x, w,
                 mod(w), k_a, k_b);
    std::fprintf(out, "{\"name\":\"hash_to_g1\",\"q\":%ld,\"message\":\"abc\",\"value\":%ld}\n", q, hash_to_g1("abc"));
    return std::fclose(out) == 0 ? 0 : 1;
}
