// chamauth: operator CLI for keys, identity tokens, authentication sessions,
// tracing, benchmarks and the synthetic biometrics experiment.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "chamauth/chamauth.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace chamauth;

namespace {

struct Config {
    std::string backend = "curve";
    std::optional<std::uint64_t> toy_q;
    double noise_rate = bio::default_noise;
    double threshold = bio::default_threshold;
    unsigned challenge_window_secs = 30;

    json to_json() const {
        json j;
        j["backend"] = backend;
        j["toy_q"] = toy_q ? json(*toy_q) : json(nullptr);
        j["noise_rate"] = noise_rate;
        j["threshold"] = threshold;
        j["challenge_window_secs"] = challenge_window_secs;
        return j;
    }

    static Config from_json(const json& j) {
        Config c;
        c.backend = j.at("backend").get<std::string>();
        if (!j.at("toy_q").is_null()) c.toy_q = j.at("toy_q").get<std::uint64_t>();
        c.noise_rate = j.value("noise_rate", c.noise_rate);
        c.threshold = j.value("threshold", c.threshold);
        c.challenge_window_secs = j.value("challenge_window_secs", c.challenge_window_secs);
        return c;
    }

    void validate() const {
        if (backend != "curve" && backend != "toy")
            throw Error(ErrorCode::invalid_argument, "backend must be 'curve' or 'toy'");
        if ((backend == "toy") != toy_q.has_value())
            throw Error(ErrorCode::invalid_argument, "--toy-q is required for the toy backend and only allowed there");
        if (!(noise_rate >= 0.0 && noise_rate < 0.5)) throw Error(ErrorCode::invalid_argument, "noise rate must lie in [0, 0.5)");
        if (!(threshold > 0.0 && threshold < 1.0)) throw Error(ErrorCode::invalid_argument, "threshold must lie in (0, 1)");
        if (challenge_window_secs == 0 || challenge_window_secs > 3600)
            throw Error(ErrorCode::invalid_argument, "challenge window must be 1..3600 seconds");
    }
};

struct Globals {
    std::string backend;
    std::optional<std::uint64_t> toy_q;
    std::string data_dir;
    std::optional<std::uint64_t> seed;
    bool dev = false;
};

fs::path data_dir(const Globals& g) {
    if (!g.data_dir.empty()) return g.data_dir;
    if (const char* env = std::getenv("CHAMAUTH_DATA_DIR"); env && *env) return env;
    return "chamauth-data";
}

fs::path config_path(const Globals& g) { return data_dir(g) / "config.json"; }

Bytes read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error(ErrorCode::io, "cannot read " + p.string());
    return Bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_file(const fs::path& p, ByteView data) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size()));
    if (!out) throw Error(ErrorCode::io, "cannot write " + p.string());
}

/// The stored config when the data dir is initialised, else the flags.
/// Explicit flags that contradict a stored config are an error.
Config load_config(const Globals& g) {
    Config c;
    if (fs::exists(config_path(g))) {
        c = Config::from_json(json::parse(std::ifstream(config_path(g))));
        if (!g.backend.empty() && g.backend != c.backend)
            throw Error(ErrorCode::invalid_argument, "data dir is initialised for backend '" + c.backend + "'");
        if (g.toy_q && g.toy_q != c.toy_q) throw Error(ErrorCode::invalid_argument, "--toy-q differs from the data dir");
    } else {
        if (!g.backend.empty()) c.backend = g.backend;
        c.toy_q = g.toy_q;
    }
    c.validate();
    return c;
}

template <class F>
int with_group(const Config& c, F&& f) {
    if (c.backend == "toy") return f(toy_setup(*c.toy_q));
    return f(setup(128));
}

Rng make_rng(const Globals& g) { return g.seed ? Rng::seeded(*g.seed) : Rng(); }

void refuse_seed_for_keys(const Globals& g) {
    if (g.seed && !g.dev)
        throw Error(ErrorCode::invalid_argument, "--seed is refused for key generation outside --dev mode");
}

Digest parse_digest(const std::string& hex) {
    auto b = from_hex(hex);
    if (b.size() != 32) throw Error(ErrorCode::invalid_argument, "digest must be 64 hex characters");
    Digest d{};
    std::copy(b.begin(), b.end(), d.begin());
    return d;
}

std::string fingerprint(ByteView data) { return to_hex(sha256(data)).substr(0, 16); }

std::string printable_or_hex(ByteView b) {
    for (auto c : b)
        if (c < 0x20 || c > 0x7e) return "hex:" + to_hex(b);
    return std::string(b.begin(), b.end());
}

void print(const json& j) { std::cout << j.dump() << std::endl; }

/// Files kept by an initialised data dir.
struct Store {
    fs::path dir;
    fs::path idp_key() const { return dir / "idp.key"; }
    fs::path idp_pub() const { return dir / "idp.pub"; }
    fs::path ledger() const { return dir / "ledger.bin"; }
    fs::path registry() const { return dir / "registry.db"; }
};

Store open_store(const Globals& g) {
    Store s{data_dir(g)};
    if (!fs::exists(config_path(g))) throw Error(ErrorCode::io, "data dir " + s.dir.string() + " is not initialised (run 'idp init')");
    return s;
}

template <class G>
IdpKey<G> load_idp_key(const G& grp, const Store& s) {
    auto kf = chameleon::decode_key_file(grp, read_file(s.idp_key()));
    if (!kf.sk) throw Error(ErrorCode::invalid_key, "IDP key file holds no secret");
    return idp_key_from_secret(grp, *kf.sk);
}

template <class G>
typename G::G1 load_idp_vk(const G& grp, const Store& s) {
    return grp.decode_g1(read_file(s.idp_pub()));
}

template <class G>
Mit<G> load_mit(const G& grp, const Ledger& ledger, const std::string& digest_hex) {
    return decode_mit(grp, ledger.get(parse_digest(digest_hex)));
}

template <class G>
typename G::Scalar load_secret(const G& grp, const fs::path& p) {
    auto kf = chameleon::decode_key_file(grp, read_file(p));
    if (!kf.sk) throw Error(ErrorCode::invalid_key, p.string() + " holds no secret key");
    return *kf.sk;
}

std::pair<std::string, std::uint16_t> split_host_port(const std::string& s) {
    auto colon = s.rfind(':');
    if (colon == std::string::npos) throw Error(ErrorCode::invalid_argument, "expected host:port");
    auto port = std::stoul(s.substr(colon + 1));
    if (port == 0 || port > 65535) throw Error(ErrorCode::invalid_argument, "port out of range");
    return {s.substr(0, colon), static_cast<std::uint16_t>(port)};
}

// Commands -------------------------------------------------------------------

struct KeygenArgs {
    std::string out;
};

int cmd_keygen(const Globals& g, const KeygenArgs& a) {
    refuse_seed_for_keys(g);
    auto cfg = load_config(g);
    return with_group(cfg, [&](const auto& grp) {
        auto rng = make_rng(g);
        auto kp = chameleon::keygen(grp, rng);
        fs::path secret = a.out;
        fs::path pub = secret;
        pub.replace_extension(".pub");
        if (pub == secret) pub += ".pub";
        write_file(secret, chameleon::encode_key_file(grp, std::optional(kp.sk), std::optional(kp.pk)));
        write_file(pub, chameleon::encode_key_file<std::decay_t<decltype(grp)>>(grp, std::nullopt, std::optional(kp.pk)));
        print({{"backend", cfg.backend},
               {"secret_key", secret.string()},
               {"public_key", pub.string()},
               {"fingerprint", fingerprint(chameleon::encode_public_key(grp, kp.pk))}});
        return 0;
    });
}

struct InitArgs {
    bool force = false;
    std::optional<double> noise, threshold;
    std::optional<unsigned> window;
};

int cmd_idp_init(const Globals& g, const InitArgs& a) {
    refuse_seed_for_keys(g);
    Store s{data_dir(g)};
    if (fs::exists(config_path(g)) && !a.force)
        throw Error(ErrorCode::io, "data dir " + s.dir.string() + " is already initialised (use --force)");
    Config cfg;
    if (!g.backend.empty()) cfg.backend = g.backend;
    cfg.toy_q = g.toy_q;
    if (a.noise) cfg.noise_rate = *a.noise;
    if (a.threshold) cfg.threshold = *a.threshold;
    if (a.window) cfg.challenge_window_secs = *a.window;
    cfg.validate();
    fs::create_directories(s.dir);
    for (const auto& p : {s.ledger(), s.registry()}) fs::remove(p);
    return with_group(cfg, [&](const auto& grp) {
        auto rng = make_rng(g);
        auto key = idp_keygen(grp, rng);
        write_file(s.idp_key(), chameleon::encode_key_file<std::decay_t<decltype(grp)>>(grp, std::optional(key.sk), std::nullopt));
        write_file(s.idp_pub(), grp.encode(key.vk));
        std::ofstream(config_path(g)) << cfg.to_json().dump(2) << '\n';
        print({{"data_dir", s.dir.string()},
               {"backend", cfg.backend},
               {"group", grp.params().group_id},
               {"idp_vk", to_hex(grp.encode(key.vk))}});
        return 0;
    });
}

struct RegisterArgs {
    std::string id, anon, template_path, pubkey;
};

int cmd_idp_register(const Globals& g, const RegisterArgs& a) {
    auto cfg = load_config(g);
    auto s = open_store(g);
    return with_group(cfg, [&](const auto& grp) {
        using G = std::decay_t<decltype(grp)>;
        auto kf = chameleon::decode_key_file(grp, read_file(a.pubkey));
        if (!kf.pk) throw Error(ErrorCode::invalid_key, a.pubkey + " holds no public key");
        bio::BioTemplate T{bio::decode_code(read_file(a.template_path)), a.anon};
        Ledger ledger(s.ledger());
        Registry registry(s.registry());
        Idp<G> idp(grp, load_idp_key(grp, s), ledger, registry);
        auto rng = make_rng(g);
        auto mit = idp.register_player(to_bytes(a.id), to_bytes(a.anon), T, *kf.pk, rng);
        print({{"mit_digest", to_hex(mit_digest(grp, mit))}, {"ledger_index", ledger.size() - 1}});
        return 0;
    });
}

int cmd_idp_show(const Globals& g, const std::string& digest) {
    auto cfg = load_config(g);
    auto s = open_store(g);
    return with_group(cfg, [&](const auto& grp) {
        Ledger ledger(s.ledger());
        auto mit = load_mit(grp, ledger, digest);
        bool sig_ok = mit_signature_valid(grp, load_idp_vk(grp, s), mit);
        bool check_ok = chameleon::check(grp, mit.y, mit.h, mit.M, mit.R);
        print({{"mit_digest", to_hex(mit_digest(grp, mit))},
               {"anon_id", printable_or_hex(mit.M)},
               {"template_fingerprint", fingerprint(bio::encode_code(mit.T))},
               {"y1", to_hex(grp.encode(mit.y.y1))},
               {"y2", to_hex(grp.encode(mit.y.y2))},
               {"h", to_hex(grp.encode(mit.h.h))},
               {"R", to_hex(grp.encode(mit.R.value()))},
               {"idp_signature_valid", sig_ok},
               {"check_valid", check_ok}});
        return sig_ok && check_ok ? 0 : 3;
    });
}

struct TemplateArgs {
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_bio_template(const TemplateArgs& a) {
    auto t = bio::gen_template(a.seed);
    write_file(a.out, bio::encode_code(t.code));
    print({{"template", a.out}, {"seed", a.seed}, {"bits", bio::code_bits}, {"fingerprint", fingerprint(bio::encode_code(t.code))}});
    return 0;
}

struct SimulateArgs {
    std::size_t trials = 1000;
    double noise = bio::default_noise;
    double threshold = bio::default_threshold;
    std::uint64_t seed = 1;
};

int cmd_bio_simulate(const SimulateArgs& a) {
    auto rep = bio::simulate(a.trials, a.noise, a.threshold, a.seed);
    json sweep = json::array();
    for (const auto& r : rep.sweep)
        sweep.push_back({{"threshold", r.threshold},
                         {"genuine_accept_native", r.genuine_accept_native},
                         {"genuine_accept_watermarked", r.genuine_accept_watermarked},
                         {"impostor_accept_native", r.impostor_accept_native},
                         {"impostor_accept_watermarked", r.impostor_accept_watermarked}});
    print({{"trials", rep.trials},
           {"noise", rep.noise},
           {"threshold", rep.threshold},
           {"frr", rep.frr},
           {"far", rep.far},
           {"frr_native", rep.frr_native},
           {"far_native", rep.far_native},
           {"max_gap", rep.max_gap},
           {"roundtrip_failures", rep.roundtrip_failures},
           {"sweep", sweep}});
    return 0;
}

struct AvatarArgs {
    std::string key, mit, info, out;
};

int cmd_avatar_create(const Globals& g, const AvatarArgs& a) {
    auto cfg = load_config(g);
    auto s = open_store(g);
    return with_group(cfg, [&](const auto& grp) {
        Ledger ledger(s.ledger());
        auto mit = load_mit(grp, ledger, a.mit);
        auto vid = create_vid(grp, load_secret(grp, a.key), mit, to_bytes(a.info));
        if (!claim_matches_mit(grp, mit, vid.claim))
            throw Error(ErrorCode::invalid_key, "secret key does not belong to this MIT");
        Bytes enc;
        write_vid(grp, enc, vid);
        write_file(a.out, enc);
        print({{"vid", a.out}, {"mit_digest", a.mit}, {"verified", true}});
        return 0;
    });
}

struct SessionArgs {
    std::string role;
    std::optional<std::uint16_t> listen;
    std::string connect;
    std::string key, mit, avatar, template_path;
    std::string retain, transcript;
    unsigned rechallenge = 0;
    unsigned timeout_ms = 30000;
};

template <class G>
proto::Credential<G> load_credential(const G& grp, const Ledger& ledger, const SessionArgs& a) {
    if (a.key.empty() || a.mit.empty() || a.avatar.empty() || a.template_path.empty())
        throw Error(ErrorCode::invalid_argument, "role " + a.role + " needs --key, --mit, --avatar and --template");
    auto mit = load_mit(grp, ledger, a.mit);
    auto vid_bytes = read_file(a.avatar);
    ByteReader r(vid_bytes);
    auto vid = read_vid(grp, r);
    r.expect_done();
    bio::BioTemplate live{bio::decode_code(read_file(a.template_path)), a.role};
    return {std::move(mit), load_secret(grp, a.key), std::move(vid), std::move(live)};
}

int cmd_session_run(const Globals& g, const SessionArgs& a) {
    auto cfg = load_config(g);
    auto s = open_store(g);
    if (a.listen.has_value() == !a.connect.empty())
        throw Error(ErrorCode::invalid_argument, "give exactly one of --listen or --connect");
    return with_group(cfg, [&](const auto& grp) {
        using G = std::decay_t<decltype(grp)>;
        Ledger ledger(s.ledger());
        TrustAnchor<G> anchor{load_idp_vk(grp, s), &ledger};
        auto rng = make_rng(g);
        proto::SessionConfig scfg;
        scfg.capture_noise = cfg.noise_rate;
        scfg.threshold = cfg.threshold;
        scfg.challenge_window = std::chrono::seconds(cfg.challenge_window_secs);
        auto timeout = std::chrono::milliseconds(a.timeout_ms);

        std::unique_ptr<proto::Transport> transport;
        if (a.listen) {
            proto::TcpListener listener(*a.listen);
            std::cerr << "listening on port " << listener.port() << std::endl;
            transport = listener.accept(timeout);
        } else {
            auto [host, port] = split_host_port(a.connect);
            transport = proto::TcpTransport::connect(host, port);
        }

        json out{{"role", a.role}};
        const proto::SessionCore* core = nullptr;
        std::optional<proto::Retained<G>> retained;

        std::unique_ptr<proto::Endpoint> holder;
        if (a.role == "a" || a.role == "b") {
            auto cred = load_credential(grp, ledger, a);
            std::unique_ptr<proto::TwoPartyBase<G>> ep;
            if (a.role == "a")
                ep = std::make_unique<proto::TwoPartyInitiator<G>>(grp, std::move(cred), anchor, rng, scfg);
            else
                ep = std::make_unique<proto::TwoPartyResponder<G>>(grp, std::move(cred), anchor, rng, scfg);
            proto::drive(*ep, *transport, timeout);
            auto key = ep->session_key();
            out["session_key_fingerprint"] = key ? json(fingerprint(*key)) : json(nullptr);
            json costs;
            for (const auto& [phase, c] : ep->costs()) costs[std::string(proto::to_string(phase))] = c.to_string();
            costs["Total"] = proto::total(ep->costs()).to_string();
            out["costs"] = costs;
            retained = ep->retained();
            core = ep.get();
            holder = std::move(ep);
        } else if (a.role == "prover") {
            auto ep = std::make_unique<proto::OnePartyProver<G>>(grp, load_credential(grp, ledger, a), rng, scfg);
            proto::drive(*ep, *transport, timeout);
            for (unsigned i = 0; i < a.rechallenge && ep->status() == proto::Status::accepted; ++i) {
                auto frame = transport->receive(timeout);
                for (auto& f : ep->on_frame(frame)) transport->send(f);
                proto::pump(*ep, *transport, timeout);
            }
            core = ep.get();
            holder = std::move(ep);
        } else if (a.role == "verifier") {
            auto ep = std::make_unique<proto::OnePartyVerifier<G>>(grp, anchor, rng, scfg);
            proto::drive(*ep, *transport, timeout);
            for (unsigned i = 0; i < a.rechallenge && ep->status() == proto::Status::accepted; ++i) {
                transport->send(ep->rechallenge());
                proto::pump(*ep, *transport, timeout);
            }
            out["accepted_responses"] = ep->accepted_responses();
            out["costs"] = {{"Total", ep->cost().to_string()}};
            retained = ep->retained();
            core = ep.get();
            holder = std::move(ep);
        } else {
            throw Error(ErrorCode::invalid_argument, "role must be a, b, prover or verifier");
        }

        bool accepted = core->status() == proto::Status::accepted;
        out["status"] = accepted ? "accepted" : "aborted";
        out["abort_reason"] = core->abort_reason() ? json(std::string(proto::to_string(*core->abort_reason()))) : json(nullptr);
        out["frames"] = core->transcript().size();
        if (!a.transcript.empty()) {
            auto dump = proto::dump_transcript(core->transcript());
            write_file(a.transcript, to_bytes(dump));
        }
        if (!a.retain.empty()) {
            if (!accepted || !retained) throw Error(ErrorCode::io, "nothing to retain: the peer was not accepted");
            write_file(a.retain, encode_trace_bundle(grp, trace_request_from(*retained, "session"), core->session_id()));
            out["retained"] = a.retain;
        }
        print(out);
        if (!accepted) {
            std::cerr << "error: session aborted (" << out["abort_reason"].dump() << ")" << std::endl;
            return 2;
        }
        return 0;
    });
}

struct TraceArgs {
    std::string request;
};

int cmd_trace(const Globals& g, const TraceArgs& a) {
    auto cfg = load_config(g);
    auto s = open_store(g);
    return with_group(cfg, [&](const auto& grp) {
        using G = std::decay_t<decltype(grp)>;
        Ledger ledger(s.ledger());
        Registry registry(s.registry());
        Idp<G> idp(grp, load_idp_key(grp, s), ledger, registry);
        auto req = decode_trace_bundle(grp, read_file(a.request));
        auto v = trace(idp, req, cfg.threshold);
        print({{"reason", std::string(to_string(v.reason))},
               {"disclosed", v.disclosed.has_value()},
               {"real_id", v.disclosed ? json(printable_or_hex(*v.disclosed)) : json(nullptr)},
               {"reporter", req.reporter},
               {"mit_digest", to_hex(mit_digest(grp, req.mit))}});
        return 0;
    });
}

struct BenchArgs {
    unsigned iterations = 10;
    bool table2 = false;
    bool table3 = false;
};

template <class F>
double mean_ms(unsigned n, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    for (unsigned i = 0; i < n; ++i) f(i);
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() / n;
}

int cmd_bench(const Globals& g, const BenchArgs& a) {
    if (a.iterations < 1) throw Error(ErrorCode::invalid_argument, "--iterations must be at least 1");
    auto cfg = load_config(g);
    return with_group(cfg, [&](const auto& grp) {
        using G = std::decay_t<decltype(grp)>;
        auto rng = g.seed ? Rng::seeded(*g.seed) : Rng::seeded(20240101);
        auto kp = chameleon::keygen(grp, rng);
        std::vector<Bytes> msgs, alts;
        for (unsigned i = 0; i < a.iterations; ++i) {
            msgs.push_back(rng.bytes(32));
            alts.push_back(rng.bytes(32));
        }
        std::vector<chameleon::HashOutput<G>> hashed;
        std::vector<chameleon::CheckParam<G>> signed_r;
        hashed.reserve(a.iterations);
        signed_r.reserve(a.iterations);

        OpCounts c_hash, c_check, c_sign, c_verify;
        {
            CountScope sc;
            hashed.push_back(chameleon::hash(grp, kp.pk, msgs[0], rng));
            c_hash = sc.counts();
            sc.reset();
            (void)chameleon::check(grp, kp.pk, hashed[0].hash, msgs[0], hashed[0].check);
            c_check = sc.counts();
            sc.reset();
            signed_r.push_back(chameleon::sign(grp, kp.sk, hashed[0].hash, alts[0]));
            c_sign = sc.counts();
            sc.reset();
            (void)chameleon::verify(grp, kp.pk, hashed[0].hash, {msgs[0], hashed[0].check}, {alts[0], signed_r[0]});
            c_verify = sc.counts();
            hashed.clear();
            signed_r.clear();
        }

        bool all_ok = true;
        double t_hash = mean_ms(a.iterations, [&](unsigned i) { hashed.push_back(chameleon::hash(grp, kp.pk, msgs[i], rng)); });
        double t_check = mean_ms(a.iterations, [&](unsigned i) {
            all_ok &= chameleon::check(grp, kp.pk, hashed[i].hash, msgs[i], hashed[i].check);
        });
        double t_sign = mean_ms(a.iterations, [&](unsigned i) { signed_r.push_back(chameleon::sign(grp, kp.sk, hashed[i].hash, alts[i])); });
        double t_verify = mean_ms(a.iterations, [&](unsigned i) {
            all_ok &= chameleon::verify(grp, kp.pk, hashed[i].hash, {msgs[i], hashed[i].check}, {alts[i], signed_r[i]});
        });

        // Tracing core steps on one enrolled player.
        Ledger ledger;
        Registry registry;
        Idp<G> idp(grp, idp_keygen(grp, rng), ledger, registry);
        auto cred = enroll(idp, "bench", rng);
        bio::Nonce nonce{};
        rng.fill(nonce);
        auto pid = proto::respond_to_challenge(grp, cred, nonce, cfg.noise_rate, rng);
        auto feature = pid.feature();
        double t_match = mean_ms(a.iterations, [&](unsigned) { all_ok &= bio::match(feature, cred.live, cfg.threshold); });
        double t_extract = mean_ms(a.iterations, [&](unsigned) { all_ok &= bio::extract_watermark(feature, pid.salt) == nonce; });
        double t_trace_verify = mean_ms(a.iterations, [&](unsigned) { all_ok &= claim_matches_mit(grp, cred.mit, pid.claim); });

        std::cout << std::fixed << std::setprecision(3);
        std::cout << "backend " << cfg.backend << " group " << grp.params().group_id << " iterations " << a.iterations << "\n";
        auto metric = [](const char* name, double v) { std::cout << "metric " << name << " " << v << " ms\n"; };
        metric("hash_mean", t_hash);
        metric("check_mean", t_check);
        metric("sign_mean", t_sign);
        metric("verify_mean", t_verify);
        metric("sign_verify_mean", t_sign + t_verify);
        metric("trace_match_mean", t_match);
        metric("trace_extract_mean", t_extract);
        metric("trace_verify_mean", t_trace_verify);
        std::cout << "soft sign_verify_under_50ms " << (t_sign + t_verify < 50.0 ? "PASS" : "WARN") << "\n";
        std::cout << "correct " << (all_ok ? "yes" : "no") << "\n";

        if (a.table2) {
            std::initializer_list<Op> order{Op::e1, Op::e2, Op::et, Op::m1, Op::pairing};
            std::cout << "\nper-algorithm cost\n";
            std::cout << "Hash    " << c_hash.to_string(order) << "\n";
            std::cout << "Check   " << c_check.to_string(order) << "\n";
            std::cout << "Sign    " << c_sign.to_string(order) << "\n";
            std::cout << "Verify  " << c_verify.to_string(order) << "\n";
        }
        if (a.table3) {
            TrustAnchor<G> anchor{idp.verification_key(), &ledger};
            auto peer = enroll(idp, "bench-peer", rng);
            proto::TwoPartyInitiator<G> ea(grp, cred, anchor, rng);
            proto::TwoPartyResponder<G> eb(grp, peer, anchor, rng);
            proto::run_in_memory(ea, eb);
            if (!ea.session_key() || ea.session_key() != eb.session_key()) all_ok = false;
            std::cout << "\ntwo-party per-phase cost\n";
            for (auto phase : {proto::CostPhase::round1, proto::CostPhase::round2, proto::CostPhase::session})
                std::cout << std::left << std::setw(27) << proto::to_string(phase) << " A: " << std::setw(20)
                          << ea.costs().at(phase).to_string() << " B: " << eb.costs().at(phase).to_string() << "\n";
            std::cout << std::left << std::setw(27) << "Total"
                      << " A: " << std::setw(20) << proto::total(ea.costs()).to_string()
                      << " B: " << proto::total(eb.costs()).to_string() << "\n";
        }
        return all_ok ? 0 : 3;
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"chamauth: chameleon-signature avatar authentication"};
    app.require_subcommand(1);
    app.fallthrough();
    Globals g;
    app.add_option("--backend", g.backend, "Group backend")->check(CLI::IsMember({"curve", "toy"}));
    app.add_option("--toy-q", g.toy_q, "Prime order for the toy backend");
    app.add_option("--data-dir", g.data_dir, "State directory (default: $CHAMAUTH_DATA_DIR or ./chamauth-data)");
    app.add_option("--seed", g.seed, "Seed all randomness (reproducible runs)");
    app.add_flag("--dev", g.dev, "Development mode: allow --seed for key generation");

    int rc = 0;

    KeygenArgs keygen;
    auto* c_keygen = app.add_subcommand("keygen", "Generate a chameleon key pair (.key and .pub)");
    c_keygen->add_option("--out", keygen.out, "Secret key file")->required();
    c_keygen->callback([&] { rc = cmd_keygen(g, keygen); });

    auto* c_idp = app.add_subcommand("idp", "Identity provider")->require_subcommand(1);
    InitArgs init;
    auto* c_init = c_idp->add_subcommand("init", "Initialise the data dir: config, IDP key, empty ledger");
    c_init->add_flag("--force", init.force, "Reinitialise an existing data dir");
    c_init->add_option("--noise", init.noise, "Capture noise rate");
    c_init->add_option("--threshold", init.threshold, "Biometric match threshold");
    c_init->add_option("--window", init.window, "Challenge freshness window in seconds");
    c_init->callback([&] { rc = cmd_idp_init(g, init); });

    RegisterArgs reg;
    auto* c_reg = c_idp->add_subcommand("register", "Issue and publish an MIT");
    c_reg->add_option("--id", reg.id, "Real identity")->required();
    c_reg->add_option("--anon", reg.anon, "Anonymous identity M")->required();
    c_reg->add_option("--template", reg.template_path, "Biometric template file")->required();
    c_reg->add_option("--pubkey", reg.pubkey, "Public key file")->required();
    c_reg->callback([&] { rc = cmd_idp_register(g, reg); });

    std::string show_digest;
    auto* c_show = c_idp->add_subcommand("show", "Fetch an MIT from the ledger");
    c_show->add_option("digest", show_digest, "MIT digest (hex)")->required();
    c_show->callback([&] { rc = cmd_idp_show(g, show_digest); });

    auto* c_bio = app.add_subcommand("bio", "Synthetic biometrics")->require_subcommand(1);
    TemplateArgs tpl;
    auto* c_tpl = c_bio->add_subcommand("template", "Generate a template file from a seed");
    c_tpl->add_option("--seed", tpl.seed, "Template seed")->required();
    c_tpl->add_option("--out", tpl.out, "Output file")->required();
    c_tpl->callback([&] { rc = cmd_bio_template(tpl); });

    SimulateArgs sim;
    auto* c_sim = c_bio->add_subcommand("simulate", "FRR/FAR experiment with and without watermarks");
    c_sim->add_option("--trials", sim.trials, "Number of trials")->check(CLI::PositiveNumber);
    c_sim->add_option("--noise", sim.noise, "Capture noise rate")->check(CLI::Range(0.0, 0.4999));
    c_sim->add_option("--threshold", sim.threshold, "Match threshold")->check(CLI::Range(0.0, 1.0));
    c_sim->add_option("--seed", sim.seed, "Simulation seed");
    c_sim->callback([&] { rc = cmd_bio_simulate(sim); });

    auto* c_avatar = app.add_subcommand("avatar", "Avatars")->require_subcommand(1);
    AvatarArgs av;
    auto* c_av = c_avatar->add_subcommand("create", "Create a VID under an MIT");
    c_av->add_option("--key", av.key, "Secret key file")->required();
    c_av->add_option("--mit", av.mit, "MIT digest (hex)")->required();
    c_av->add_option("--info", av.info, "Avatar information M_a")->required();
    c_av->add_option("--out", av.out, "VID output file")->required();
    c_av->callback([&] { rc = cmd_avatar_create(g, av); });

    auto* c_session = app.add_subcommand("session", "Authentication sessions")->require_subcommand(1);
    SessionArgs sa;
    auto* c_run = c_session->add_subcommand("run", "Run one protocol role over TCP");
    c_run->add_option("--role", sa.role, "a | b (two-party), prover | verifier (one-party)")
        ->required()
        ->check(CLI::IsMember({"a", "b", "prover", "verifier"}));
    c_run->add_option("--listen", sa.listen, "Accept one peer on this port");
    c_run->add_option("--connect", sa.connect, "Connect to host:port");
    c_run->add_option("--key", sa.key, "Secret key file");
    c_run->add_option("--mit", sa.mit, "Own MIT digest (hex)");
    c_run->add_option("--avatar", sa.avatar, "Own VID file");
    c_run->add_option("--template", sa.template_path, "Live biometric template file");
    c_run->add_option("--retain", sa.retain, "Write the peer's retained bundle here");
    c_run->add_option("--transcript", sa.transcript, "Write the frame transcript here (hex, one per line)");
    c_run->add_option("--rechallenge", sa.rechallenge, "One-party: further challenges after acceptance");
    c_run->add_option("--timeout-ms", sa.timeout_ms, "Receive timeout");
    c_run->callback([&] { rc = cmd_session_run(g, sa); });

    TraceArgs tr;
    auto* c_trace = app.add_subcommand("trace", "IDP: check a retained bundle and disclose the real identity");
    c_trace->add_option("--request", tr.request, "Bundle file")->required();
    c_trace->callback([&] { rc = cmd_trace(g, tr); });

    BenchArgs bench;
    auto* c_bench = app.add_subcommand("bench", "Timing and op-count report");
    c_bench->add_option("--iterations", bench.iterations, "Iterations per operation")->check(CLI::PositiveNumber);
    c_bench->add_flag("--table2", bench.table2, "Print per-algorithm op counts");
    c_bench->add_flag("--table3", bench.table3, "Print per-phase protocol op counts");
    c_bench->callback([&] { rc = cmd_bench(g, bench); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return rc;
}
