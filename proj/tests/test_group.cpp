#include "support.hpp"

using namespace chamauth;
using namespace chamauth::testing;

TEST(GroupSetup, CurveParams) {
    auto grp = setup(128);
    EXPECT_EQ(grp.params().group_id, "bls12-381");
    EXPECT_EQ(grp.g1_size(), 48u);
    EXPECT_EQ(grp.g2_size(), 96u);
    try {
        (void)setup(256);
        FAIL() << "expected unsupported_level";
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::unsupported_level);
    }
}

TEST(GroupSetup, ToyRejectsComposites) {
    EXPECT_NO_THROW(toy_setup(13));
    EXPECT_NO_THROW(toy_setup(mersenne61));
    EXPECT_THROW(toy_setup(12), Error);
    EXPECT_THROW(toy_setup(1), Error);
    EXPECT_THROW(toy_setup(mersenne61 - 2), Error);
}

TEST(ToyOracle, MatchesLibraryArithmetic) {
    auto v = toy_vectors();
    auto grp = toy_setup(13);
    const auto& pv = v.at("pairing");
    EXPECT_EQ(grp.pair(grp.element_g1(pv["a"]), grp.element_g2(pv["b"])).v, pv["e"].get<std::uint64_t>());
    EXPECT_EQ(pv["e"], 12);
    const auto& hv = v.at("hash_to_g1");
    EXPECT_EQ(grp.hash_to_g1(to_bytes(hv["message"].get<std::string>())).v, hv["value"].get<std::uint64_t>());
}

TEST(ToyGroup, HashNeverIdentity) {
    auto grp = toy_setup(13);
    for (int i = 0; i < 200; ++i) EXPECT_FALSE(grp.hash_to_g1(to_bytes(std::to_string(i))).is_identity());
}

TEST(ToyGroup, EncodingRangeChecked) {
    auto grp = toy_setup(13);
    EXPECT_EQ(grp.decode_g1(grp.encode(grp.element_g1(12))).v, 12u);
    Bytes bad;
    append_u64(bad, 13);
    EXPECT_THROW(grp.decode_g1(bad), Error);
    EXPECT_THROW(grp.decode_g1(Bytes(7, 0)), Error);
}

TEST(OpCounter, CountsAndScopes) {
    auto grp = toy_setup(13);
    CountScope scope;
    grp.pow(grp.g1(), grp.scalar_from_u64(3));
    grp.pow(grp.g2(), grp.scalar_from_u64(3));
    grp.mul(grp.g1(), grp.g1());
    grp.div(grp.g1(), grp.g1());
    grp.pair(grp.g1(), grp.g2());
    {
        UncountedScope quiet;
        grp.pair(grp.g1(), grp.g2());
    }
    grp.hash_to_g1(to_bytes("x"));
    auto c = scope.counts();
    EXPECT_EQ(c.e1, 1u);
    EXPECT_EQ(c.e2, 1u);
    EXPECT_EQ(c.m1, 2u);
    EXPECT_EQ(c.p, 1u);
    EXPECT_EQ(c.et, 0u);
    EXPECT_EQ(c.to_string(), "2 M1 + 1 P + 1 E1 + 1 E2");
    EXPECT_EQ(OpCounts{}.to_string(), "--");
}

template <class B>
class GroupLaws : public ::testing::Test {
protected:
    typename B::Group grp = B::make();
    Rng rng = Rng::seeded(11);
};
TYPED_TEST_SUITE(GroupLaws, Backends, BackendNames);

TYPED_TEST(GroupLaws, ExponentIdentities) {
    auto& grp = this->grp;
    for (int i = 0; i < 5; ++i) {
        auto a = grp.random_scalar(this->rng);
        auto b = grp.random_scalar(this->rng);
        auto ga = grp.pow(grp.g1(), a);
        EXPECT_EQ(grp.mul(ga, grp.pow(grp.g1(), b)), grp.pow(grp.g1(), a + b));
        EXPECT_EQ(grp.pow(ga, b), grp.pow(grp.g1(), a * b));
        EXPECT_EQ(grp.div(grp.mul(ga, grp.g1()), grp.g1()), ga);
        EXPECT_EQ(grp.pow(ga, a.inverse()), grp.g1());
        EXPECT_EQ(grp.pair(ga, grp.pow(grp.g2(), b)), grp.pow(grp.pair(grp.g1(), grp.g2()), a * b));
    }
}

TYPED_TEST(GroupLaws, EncodingRoundTrip) {
    auto& grp = this->grp;
    auto s = grp.random_scalar(this->rng);
    auto p = grp.pow(grp.g1(), s);
    auto q = grp.pow(grp.g2(), s);
    EXPECT_EQ(grp.decode_g1(grp.encode(p)), p);
    EXPECT_EQ(grp.decode_g2(grp.encode(q)), q);
    EXPECT_EQ(grp.decode_scalar(grp.encode_scalar(s)), s);
    EXPECT_EQ(grp.encode(p).size(), grp.g1_size());
    EXPECT_THROW(grp.decode_g1(Bytes(3, 1)), Error);
}

TYPED_TEST(GroupLaws, HashToG1Deterministic) {
    auto& grp = this->grp;
    EXPECT_EQ(grp.hash_to_g1(to_bytes("m")), grp.hash_to_g1(to_bytes("m")));
    EXPECT_NE(grp.hash_to_g1(to_bytes("m")), grp.hash_to_g1(to_bytes("n")));
    EXPECT_FALSE(grp.is_identity(grp.hash_to_g1(Bytes{})));
}
