#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <future>
#include <sstream>

#include "support.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code = -1;
    std::string out;
    std::string err;
    json j() const { return json::parse(out); }
};

class Cli : public ::testing::Test {
protected:
    fs::path dir;
    std::string backend_flags = "--backend toy --toy-q 2305843009213693951";

    void SetUp() override {
        dir = fs::temp_directory_path() /
              ("chamauth-cli-" + std::to_string(::getpid()) + "-" +
               ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    Result run(const std::string& args, bool with_backend = true) const {
        static std::atomic<int> counter{0};
        auto err_file = path("stderr-" + std::to_string(counter++));
        std::string cmd = std::string(CHAMAUTH_CLI) + " --data-dir " + path("data") + " " +
                          (with_backend ? backend_flags + " " : "") + args + " 2>" + err_file;
        Result r;
        FILE* p = ::popen(cmd.c_str(), "r");
        if (!p) return r;
        char buf[4096];
        for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
        int status = ::pclose(p);
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        std::ifstream e(err_file);
        r.err.assign(std::istreambuf_iterator<char>(e), {});
        return r;
    }

    static int free_port() {
        static std::atomic<int> next{20000 + ::getpid() % 20000};
        return next++;
    }

    /// init, two players (alice, bob) with keys, templates, MITs and VIDs.
    std::map<std::string, std::string> provision() {
        EXPECT_EQ(run("idp init").code, 0);
        std::map<std::string, std::string> mit;
        int seed = 1;
        for (std::string who : {"alice", "bob"}) {
            EXPECT_EQ(run("keygen --out " + path(who + ".key")).code, 0);
            EXPECT_EQ(run("bio template --seed " + std::to_string(seed++) + " --out " + path(who + ".tpl")).code, 0);
            auto reg = run("idp register --id 'Real " + who + "' --anon " + who + " --template " + path(who + ".tpl") +
                           " --pubkey " + path(who + ".pub"));
            EXPECT_EQ(reg.code, 0) << reg.err;
            mit[who] = reg.j().at("mit_digest");
            auto av = run("avatar create --key " + path(who + ".key") + " --mit " + mit[who] + " --info " + who +
                          "-avatar --out " + path(who + ".vid"));
            EXPECT_EQ(av.code, 0) << av.err;
        }
        return mit;
    }

    std::string creds(const std::string& who, const std::map<std::string, std::string>& mit) const {
        return " --key " + path(who + ".key") + " --mit " + mit.at(who) + " --avatar " + path(who + ".vid") +
               " --template " + path(who + ".tpl");
    }
};

}  // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_NE(run("", false).code, 0);
    EXPECT_NE(run("frobnicate", false).code, 0);
    auto r = run("keygen --out " + path("k.key"), false);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.j().at("backend"), "curve");
    auto toy_no_q = run("--backend toy keygen --out " + path("k.key"), false);
    EXPECT_EQ(toy_no_q.code, 1);
    EXPECT_NE(toy_no_q.err.find("error:"), std::string::npos);
}

TEST_F(Cli, SeedRefusedForKeysOutsideDevMode) {
    auto r = run("--seed 5 keygen --out " + path("k.key"));
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--dev"), std::string::npos);
    auto a = run("--dev --seed 5 keygen --out " + path("a.key"));
    auto b = run("--dev --seed 5 keygen --out " + path("b.key"));
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.j().at("fingerprint"), b.j().at("fingerprint"));
}

TEST_F(Cli, InitGuardsAndConfig) {
    auto r = run("idp init --threshold 0.30");
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* key : {"data_dir", "backend", "group", "idp_vk"}) EXPECT_TRUE(r.j().contains(key)) << key;
    EXPECT_EQ(run("idp init").code, 1);
    EXPECT_EQ(run("idp init --force").code, 0);
    EXPECT_EQ(run("--backend curve bench --iterations 1", false).code, 1);
    auto cfg = json::parse(std::ifstream(path("data/config.json")));
    EXPECT_EQ(cfg.at("backend"), "toy");
    EXPECT_EQ(cfg.at("toy_q"), 2305843009213693951ULL);
    EXPECT_EQ(cfg.at("challenge_window_secs"), 30);
    EXPECT_EQ(run("idp init --force --noise 0.7").code, 1);
}

TEST_F(Cli, RegisterShowAndAvatar) {
    auto mit = provision();
    auto show = run("idp show " + mit["alice"]);
    ASSERT_EQ(show.code, 0);
    auto j = show.j();
    EXPECT_EQ(j.at("anon_id"), "alice");
    EXPECT_EQ(j.at("idp_signature_valid"), true);
    EXPECT_EQ(j.at("check_valid"), true);
    EXPECT_EQ(run("idp register --id x --anon alice --template " + path("alice.tpl") + " --pubkey " + path("alice.pub")).code, 1);
    auto stolen = run("avatar create --key " + path("bob.key") + " --mit " + mit["alice"] + " --info x --out " + path("x.vid"));
    EXPECT_EQ(stolen.code, 1);
    EXPECT_NE(stolen.err.find("error:"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x.vid")));
    EXPECT_EQ(run("idp show " + std::string(64, '0')).code, 1);
}

TEST_F(Cli, OnePartySessionRetainAndTrace) {
    auto mit = provision();
    auto port = std::to_string(free_port());
    auto verifier = std::async(std::launch::async, [&] {
        return run("session run --role verifier --listen " + port + " --rechallenge 1 --retain " + path("bundle.bin") +
                   " --transcript " + path("transcript.txt"));
    });
    auto prover = run("session run --role prover --connect 127.0.0.1:" + port + " --rechallenge 1" + creds("alice", mit));
    auto v = verifier.get();
    ASSERT_EQ(prover.code, 0) << prover.err;
    ASSERT_EQ(v.code, 0) << v.err;
    EXPECT_EQ(prover.j().at("status"), "accepted");
    EXPECT_EQ(v.j().at("status"), "accepted");
    EXPECT_EQ(v.j().at("accepted_responses"), 2);
    EXPECT_TRUE(v.j().at("abort_reason").is_null());

    std::ifstream t(path("transcript.txt"));
    int lines = 0;
    for (std::string line; std::getline(t, line);) ++lines;
    EXPECT_EQ(lines, 7);

    auto tr = run("trace --request " + path("bundle.bin"));
    ASSERT_EQ(tr.code, 0) << tr.err;
    EXPECT_EQ(tr.j().at("reason"), "Disclosed");
    EXPECT_EQ(tr.j().at("real_id"), "Real alice");
}

TEST_F(Cli, TwoPartySessionAgreesOnKey) {
    auto mit = provision();
    auto port = std::to_string(free_port());
    auto b = std::async(std::launch::async, [&] { return run("session run --role b --listen " + port + creds("bob", mit)); });
    auto a = run("session run --role a --connect 127.0.0.1:" + port + creds("alice", mit));
    auto rb = b.get();
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    EXPECT_EQ(a.j().at("session_key_fingerprint"), rb.j().at("session_key_fingerprint"));
    EXPECT_EQ(a.j().at("costs").at("Total"), "5 M1 + 8 P + 2 E1");
    EXPECT_EQ(rb.j().at("costs").at("Total"), "5 M1 + 8 P + 3 E1");
}

TEST_F(Cli, StolenCredentialAborts) {
    auto mit = provision();
    auto port = std::to_string(free_port());
    auto v = std::async(std::launch::async, [&] { return run("session run --role verifier --listen " + port); });
    // Alice's token and avatar presented with Bob's live biometric.
    auto p = run("session run --role prover --connect 127.0.0.1:" + port + " --key " + path("alice.key") + " --mit " +
                 mit["alice"] + " --avatar " + path("alice.vid") + " --template " + path("bob.tpl"));
    auto rv = v.get();
    EXPECT_EQ(rv.code, 2);
    EXPECT_EQ(rv.j().at("abort_reason"), "BadBiometric");
    EXPECT_EQ(p.code, 2);
}

TEST_F(Cli, BioSimulateAndTemplate) {
    auto r = run("bio simulate --trials 200 --seed 3", false);
    ASSERT_EQ(r.code, 0);
    auto j = r.j();
    for (const char* key : {"trials", "noise", "threshold", "frr", "far", "max_gap", "roundtrip_failures", "sweep"})
        EXPECT_TRUE(j.contains(key)) << key;
    EXPECT_EQ(j.at("sweep").size(), 6u);
    auto t1 = run("bio template --seed 4 --out " + path("t1"), false);
    auto t2 = run("bio template --seed 4 --out " + path("t2"), false);
    EXPECT_EQ(t1.j().at("fingerprint"), t2.j().at("fingerprint"));
    EXPECT_EQ(fs::file_size(path("t1")), 260u);
}

TEST_F(Cli, BenchReportsTablesAndMetrics) {
    ASSERT_EQ(run("idp init").code, 0);
    auto r = run("bench --iterations 20 --table2 --table3");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("Hash    2 E1 + 1 M1"), std::string::npos);
    EXPECT_NE(r.out.find("Check   1 M1 + 2 P"), std::string::npos);
    EXPECT_NE(r.out.find("Sign    1 E1 + 1 M1"), std::string::npos);
    EXPECT_NE(r.out.find("A: 5 M1 + 8 P + 2 E1"), std::string::npos);
    EXPECT_NE(r.out.find("B: 5 M1 + 8 P + 3 E1"), std::string::npos);
    std::istringstream in(r.out);
    int metrics = 0;
    for (std::string line; std::getline(in, line);) {
        if (line.rfind("metric ", 0) != 0) continue;
        ++metrics;
        std::istringstream ls(line);
        std::string tag, name;
        double ms = 0;
        ls >> tag >> name >> ms;
        EXPECT_LT(ms, 1.0) << name;
    }
    EXPECT_EQ(metrics, 8);
    EXPECT_NE(r.out.find("metric trace_match_mean"), std::string::npos);
    EXPECT_NE(r.out.find("metric trace_extract_mean"), std::string::npos);
    EXPECT_NE(r.out.find("metric trace_verify_mean"), std::string::npos);
}

TEST_F(Cli, CurveBackendFlow) {
    backend_flags = "--backend curve";
    auto mit = provision();
    auto port = std::to_string(free_port());
    auto b = std::async(std::launch::async, [&] { return run("session run --role b --listen " + port + creds("bob", mit)); });
    auto a = run("session run --role a --connect 127.0.0.1:" + port + creds("alice", mit));
    auto rb = b.get();
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(rb.code, 0) << rb.err;
    EXPECT_EQ(a.j().at("session_key_fingerprint"), rb.j().at("session_key_fingerprint"));
}
