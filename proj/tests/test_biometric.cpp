#include "support.hpp"

using namespace chamauth;

TEST(Biometric, CodeBytesAreMsbFirst) {
    bio::Code c;
    c.set(0);
    c.set(15);
    auto b = bio::code_to_bytes(c);
    EXPECT_EQ(b[0], 0x80);
    EXPECT_EQ(b[1], 0x01);
    EXPECT_EQ(bio::code_from_bytes(b), c);
    EXPECT_THROW(bio::code_from_bytes(Bytes(255, 0)), Error);
}

TEST(Biometric, EncodedCodeHasLengthHeader) {
    auto t = bio::gen_template(5);
    auto enc = bio::encode_code(t.code);
    ASSERT_EQ(enc.size(), 260u);
    EXPECT_EQ(enc[2], 0x01);
    EXPECT_EQ(enc[3], 0x00);
    EXPECT_EQ(bio::decode_code(enc), t.code);
    enc.pop_back();
    EXPECT_THROW(bio::decode_code(enc), Error);
}

TEST(Biometric, TemplatesReproducibleFromSeed) {
    EXPECT_EQ(bio::gen_template(9).code, bio::gen_template(9).code);
    EXPECT_NE(bio::gen_template(9).code, bio::gen_template(10).code);
}

TEST(Biometric, HammingDistanceExamples) {
    bio::Code a, b;
    EXPECT_EQ(bio::fractional_hamming_distance(a, b), 0.0);
    b.flip();
    EXPECT_EQ(bio::fractional_hamming_distance(a, b), 1.0);
    for (std::size_t i = 0; i < 512; ++i) a.set(i);
    EXPECT_DOUBLE_EQ(bio::fractional_hamming_distance(a, bio::Code{}), 0.25);
}

TEST(Biometric, RandomTemplatesConcentrateNearHalf) {
    auto rng = Rng::seeded(1);
    int inside = 0;
    for (int i = 0; i < 1000; ++i) {
        double d = bio::fractional_hamming_distance(bio::random_template(rng).code, bio::random_template(rng).code);
        inside += d >= 0.45 && d <= 0.55;
    }
    EXPECT_EQ(inside, 1000);
}

TEST(Biometric, CaptureNoiseWithinBounds) {
    auto rng = Rng::seeded(2);
    auto t = bio::random_template(rng);
    for (int i = 0; i < 1000; ++i) {
        double d = bio::fractional_hamming_distance(bio::capture(t, 0.10, rng).code, t.code);
        ASSERT_GE(d, 0.07);
        ASSERT_LE(d, 0.13);
    }
    EXPECT_EQ(bio::capture(t, 0.0, rng).code, t.code);
    EXPECT_THROW(bio::capture(t, 0.5, rng), Error);
    EXPECT_THROW(bio::capture(t, -0.1, rng), Error);
}

TEST(Biometric, WatermarkPositionsDistinctAndSaltDependent) {
    auto a = bio::watermark_positions(to_bytes("salt-a"));
    auto b = bio::watermark_positions(to_bytes("salt-b"));
    ASSERT_EQ(a.size(), bio::watermark_bits);
    std::set<std::uint16_t> uniq(a.begin(), a.end());
    EXPECT_EQ(uniq.size(), bio::watermark_bits);
    EXPECT_TRUE(std::all_of(a.begin(), a.end(), [](auto p) { return p < bio::code_bits; }));
    EXPECT_NE(a, b);
    EXPECT_EQ(a, bio::watermark_positions(to_bytes("salt-a")));
}

TEST(Biometric, WatermarkRoundTripAndState) {
    auto rng = Rng::seeded(3);
    auto t = bio::random_template(rng);
    for (int i = 0; i < 200; ++i) {
        auto ch = bio::fresh_challenge(rng);
        auto salt = rng.bytes(bio::salt_bytes);
        auto f = bio::embed_watermark(bio::capture(t, 0.1, rng), ch, salt);
        ASSERT_TRUE(f.watermark_present);
        ASSERT_EQ(bio::extract_watermark(f, salt), ch.nonce);
        try {
            (void)bio::embed_watermark(f, ch, salt);
            FAIL() << "double embedding accepted";
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::watermark_state);
        }
    }
    EXPECT_THROW(bio::extract_watermark(bio::capture(t, 0.1, rng), to_bytes("s")), Error);
}

TEST(Biometric, MatchDecisions) {
    auto rng = Rng::seeded(4);
    auto t = bio::random_template(rng);
    auto other = bio::random_template(rng);
    int genuine = 0, impostor = 0, unchanged = 0;
    for (int i = 0; i < 1000; ++i) {
        auto salt = rng.bytes(bio::salt_bytes);
        auto ch = bio::fresh_challenge(rng);
        auto g = bio::capture(t, 0.1, rng);
        auto gw = bio::embed_watermark(g, ch, salt);
        auto iw = bio::embed_watermark(bio::capture(other, 0.1, rng), ch, salt);
        genuine += bio::match(gw, t);
        impostor += bio::match(iw, t);
        unchanged += bio::match(g, t) == bio::match(gw, t);
    }
    EXPECT_GE(genuine, 999);
    EXPECT_LE(impostor, 1);
    EXPECT_GE(unchanged, 990);
}

TEST(Biometric, ByteLevelMatch) {
    auto t = bio::gen_template(8);
    auto b = bio::code_to_bytes(t.code);
    EXPECT_TRUE(bio::match(b, b));
    EXPECT_THROW(bio::match(ByteView(b).first(100), ByteView(b)), Error);
}

TEST(Biometric, SimulationReport) {
    auto rep = bio::simulate(1000, 0.10, 0.32, 17);
    EXPECT_EQ(rep.trials, 1000u);
    EXPECT_LT(rep.frr, 0.001);
    EXPECT_LT(rep.far, 0.001);
    EXPECT_LT(rep.max_gap, 0.01);
    EXPECT_EQ(rep.roundtrip_failures, 0u);
    ASSERT_EQ(rep.sweep.size(), 6u);
    EXPECT_DOUBLE_EQ(rep.sweep.front().threshold, 0.20);
    EXPECT_THROW(bio::simulate(0, 0.1, 0.32, 1), Error);
}
