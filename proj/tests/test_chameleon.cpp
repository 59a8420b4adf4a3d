#include "support.hpp"

using namespace chamauth;
using namespace chamauth::testing;
namespace cham = chamauth::chameleon;

namespace {

std::uint64_t u(const nlohmann::json& j, const char* key) { return j.at(key).get<std::uint64_t>(); }

}  // namespace

class ToyFixtures : public ::testing::Test {
protected:
    ToyGroup grp = toy_setup(13);
    std::map<std::string, nlohmann::json> v = toy_vectors();

    cham::KeyPair<ToyGroup> key(std::uint64_t x) { return cham::keypair_from_secret(grp, grp.scalar_from_u64(x)); }
    cham::CheckParam<ToyGroup> param(std::uint64_t r) { return cham::CheckParam<ToyGroup>::make(grp, grp.element_g1(r)); }
};

TEST_F(ToyFixtures, KeyPairIsInverseExponent) {
    const auto& f = v.at("keypair");
    auto kp = key(u(f, "x"));
    EXPECT_EQ(kp.pk.y1.v, u(f, "y1"));
    EXPECT_EQ(kp.pk.y2.v, u(f, "y2"));
    EXPECT_EQ(kp.pk.y1.v, 9u);
}

TEST_F(ToyFixtures, HashWithForcedRandomness) {
    const auto& f = v.at("hash");
    auto kp = key(u(f, "x"));
    auto out = cham::hash_element(grp, kp.pk, grp.element_g1(u(f, "m")), grp.scalar_from_u64(u(f, "r")));
    EXPECT_EQ(out.hash.h.v, u(f, "h"));
    EXPECT_EQ(out.check.value().v, u(f, "R"));
    EXPECT_EQ(out.hash.h.v, 10u);
    EXPECT_EQ(out.check.value().v, 2u);
}

TEST_F(ToyFixtures, CheckAcceptsAndRejects) {
    for (const char* name : {"check", "check_bad_r"}) {
        const auto& f = v.at(name);
        auto kp = key(3);
        ASSERT_EQ(kp.pk.y1.v, u(f, "y"));
        bool ok = cham::check_element(grp, kp.pk, {grp.element_g1(u(f, "h"))}, grp.element_g1(u(f, "m")), param(u(f, "R")));
        EXPECT_EQ(ok, f.at("valid").get<bool>()) << name;
    }
}

TEST_F(ToyFixtures, SignProducesCollision) {
    const auto& f = v.at("sign");
    auto kp = key(u(f, "x"));
    cham::ChameleonHash<ToyGroup> h{grp.element_g1(u(f, "h"))};
    auto r_new = cham::sign_element(grp, kp.sk, h, grp.element_g1(u(f, "m_new")));
    EXPECT_EQ(r_new.value().v, u(f, "R_new"));
    EXPECT_EQ(r_new.value().v, 9u);
    EXPECT_TRUE(cham::check_element(grp, kp.pk, h, grp.element_g1(u(f, "m_new")), r_new));
}

TEST_F(ToyFixtures, WrongKeySignatureRejected) {
    const auto& f = v.at("sign_wrong_key");
    auto honest = key(3);
    auto other = key(u(f, "x"));
    cham::ChameleonHash<ToyGroup> h{grp.element_g1(u(f, "h"))};
    auto forged = cham::sign_element(grp, other.sk, h, grp.element_g1(u(f, "m_new")));
    EXPECT_EQ(forged.value().v, u(f, "R_new"));
    EXPECT_EQ(forged.value().v, 2u);
    EXPECT_FALSE(cham::check_element(grp, honest.pk, h, grp.element_g1(u(f, "m_new")), forged));
    EXPECT_FALSE(f.at("valid").get<bool>());
}

TEST_F(ToyFixtures, DegenerateBaseRefused) {
    auto kp = key(3);
    cham::ChameleonHash<ToyGroup> h{grp.element_g1(7)};
    try {
        (void)cham::sign_element(grp, kp.sk, h, grp.element_g1(7));
        FAIL() << "expected degenerate_base";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::degenerate_base);
    }
}

TEST_F(ToyFixtures, ZeroTrapdoorAndIdentityParamRefused) {
    EXPECT_THROW(key(0), Error);
    EXPECT_THROW(param(0), Error);
}

template <class B>
class ChameleonProps : public ::testing::Test {
protected:
    typename B::Group grp = B::make();
    Rng rng = Rng::seeded(42);
};
TYPED_TEST_SUITE(ChameleonProps, Backends, BackendNames);

TYPED_TEST(ChameleonProps, HashSignVerifyRoundTrip) {
    auto& grp = this->grp;
    const int n = std::is_same_v<TypeParam, CurveBackend> ? 8 : 300;
    for (int i = 0; i < n; ++i) {
        auto kp = cham::keygen(grp, this->rng);
        auto other = cham::keygen(grp, this->rng);
        auto M = this->rng.bytes(1 + i % 40);
        auto M2 = this->rng.bytes(24);
        auto out = cham::hash(grp, kp.pk, M, this->rng);
        ASSERT_TRUE(cham::check(grp, kp.pk, out.hash, M, out.check));
        auto r2 = cham::sign(grp, kp.sk, out.hash, M2);
        ASSERT_TRUE(cham::verify(grp, kp.pk, out.hash, {M, out.check}, {M2, r2}));
        ASSERT_EQ(grp.encode(cham::sign(grp, kp.sk, out.hash, M).value()), grp.encode(out.check.value()));
        ASSERT_EQ(cham::sign(grp, kp.sk, out.hash, M2), r2);
        auto forged = cham::sign(grp, other.sk, out.hash, M2);
        ASSERT_FALSE(cham::check(grp, kp.pk, out.hash, M2, forged));
        ASSERT_FALSE(cham::check(grp, kp.pk, out.hash, M, r2));
        ASSERT_FALSE(cham::verify(grp, kp.pk, out.hash, {M, out.check}, {M2, forged}));
    }
}

TYPED_TEST(ChameleonProps, TableTwoOpCounts) {
    auto& grp = this->grp;
    auto kp = cham::keygen(grp, this->rng);
    auto M = to_bytes("anon"), M2 = to_bytes("avatar");
    std::initializer_list<Op> order{Op::e1, Op::e2, Op::et, Op::m1, Op::pairing};
    CountScope scope;
    auto out = cham::hash(grp, kp.pk, M, this->rng);
    EXPECT_EQ(scope.counts().to_string(order), "2 E1 + 1 M1");
    scope.reset();
    (void)cham::check(grp, kp.pk, out.hash, M, out.check);
    EXPECT_EQ(scope.counts().to_string(order), "1 M1 + 2 P");
    scope.reset();
    auto r2 = cham::sign(grp, kp.sk, out.hash, M2);
    EXPECT_EQ(scope.counts().to_string(order), "1 E1 + 1 M1");
    scope.reset();
    (void)cham::verify(grp, kp.pk, out.hash, {M, out.check}, {M2, r2});
    EXPECT_EQ(scope.counts().to_string(order), "2 M1 + 4 P");
}

TYPED_TEST(ChameleonProps, KeyConsistency) {
    auto& grp = this->grp;
    auto a = cham::keygen(grp, this->rng);
    auto b = cham::keygen(grp, this->rng);
    EXPECT_TRUE(cham::is_consistent(grp, a.pk));
    EXPECT_FALSE(cham::is_consistent(grp, cham::PublicKey<typename TypeParam::Group>{a.pk.y1, b.pk.y2}));
}

TYPED_TEST(ChameleonProps, KeyFileRoundTrip) {
    using G = typename TypeParam::Group;
    auto& grp = this->grp;
    auto kp = cham::keygen(grp, this->rng);
    auto both = cham::decode_key_file(grp, cham::encode_key_file<G>(grp, kp.sk, kp.pk));
    ASSERT_TRUE(both.sk && both.pk);
    EXPECT_EQ(*both.sk, kp.sk);
    EXPECT_EQ(*both.pk, kp.pk);
    auto pub = cham::decode_key_file(grp, cham::encode_key_file<G>(grp, std::nullopt, kp.pk));
    EXPECT_FALSE(pub.sk);
    EXPECT_EQ(*pub.pk, kp.pk);
    auto sec = cham::decode_key_file(grp, cham::encode_key_file<G>(grp, kp.sk, std::nullopt));
    EXPECT_EQ(*sec.sk, kp.sk);
    EXPECT_FALSE(sec.pk);

    auto bytes = cham::encode_key_file<G>(grp, kp.sk, kp.pk);
    bytes[0] = 'X';
    EXPECT_THROW(cham::decode_key_file(grp, bytes), Error);
    bytes = cham::encode_key_file<G>(grp, kp.sk, kp.pk);
    bytes.push_back(0);
    EXPECT_THROW(cham::decode_key_file(grp, bytes), Error);
    EXPECT_THROW(cham::decode_key_file(grp, cham::encode_key_file<G>(grp, std::nullopt, std::nullopt)), Error);
}

TEST(ChameleonCurve, TamperedPublicKeyEncodingRejected) {
    auto grp = setup(128);
    auto rng = Rng::seeded(3);
    auto kp = cham::keygen(grp, rng);
    auto enc = cham::encode_public_key(grp, kp.pk);
    EXPECT_EQ(cham::decode_public_key(grp, enc), kp.pk);
    enc[5] ^= 0x01;
    EXPECT_THROW(cham::decode_public_key(grp, enc), Error);
}
