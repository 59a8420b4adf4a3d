#ifndef CHAMAUTH_LEDGER_HPP
#define CHAMAUTH_LEDGER_HPP

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>

#include "chamauth/common.hpp"
#include "chamauth/crypto.hpp"

namespace chamauth {

/// Append-only hash chain standing in for the public ledger.
///   digest(entry) = SHA-256(index || prev_digest || payload_digest)
/// and entry 0 has an all-zero prev_digest.
class Ledger {
public:
    struct Entry {
        std::uint64_t index = 0;
        Digest prev_digest{};
        Digest payload_digest{};
        Bytes payload;
    };

    Ledger() = default;

    /// Opens (or creates) a file-backed ledger; the stored chain is verified.
    explicit Ledger(std::filesystem::path file) : file_(std::move(file)) {
        std::ifstream in(*file_, std::ios::binary);
        if (!in) return;
        Bytes raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
        ByteReader r(raw);
        while (!r.done()) {
            auto record = r.field();
            ByteReader er(record);
            Entry e;
            e.index = er.u64();
            auto prev = er.take(32);
            std::copy(prev.begin(), prev.end(), e.prev_digest.begin());
            auto pd = er.take(32);
            std::copy(pd.begin(), pd.end(), e.payload_digest.begin());
            e.payload = er.field();
            er.expect_done();
            push(std::move(e));
        }
        if (!verify_chain()) throw Error(ErrorCode::invalid_encoding, "ledger file fails chain verification");
    }

    /// Builds a ledger from raw entries without validating them.
    static Ledger from_entries(std::vector<Entry> entries) {
        Ledger l;
        for (auto& e : entries) l.push(std::move(e));
        return l;
    }

    Ledger(const Ledger& o) : entries_(o.snapshot()) { reindex(); }
    Ledger& operator=(const Ledger&) = delete;

    static Digest entry_digest(const Entry& e) {
        Bytes buf;
        append_u64(buf, e.index);
        chamauth::append(buf, e.prev_digest);
        chamauth::append(buf, e.payload_digest);
        return sha256(buf);
    }

    std::uint64_t append(ByteView payload) {
        std::unique_lock lock(mu_);
        Entry e;
        e.index = entries_.size();
        if (!entries_.empty()) e.prev_digest = entry_digest(entries_.back());
        e.payload_digest = sha256(payload);
        e.payload.assign(payload.begin(), payload.end());
        if (file_) persist(e);
        push(std::move(e));
        return entries_.size() - 1;
    }

    Bytes get(std::uint64_t index) const {
        std::shared_lock lock(mu_);
        if (index >= entries_.size()) throw Error(ErrorCode::unknown_entry, "no ledger entry " + std::to_string(index));
        return entries_[index].payload;
    }

    /// Lookup by payload digest.
    Bytes get(const Digest& payload_digest) const {
        std::shared_lock lock(mu_);
        auto it = by_digest_.find(payload_digest);
        if (it == by_digest_.end()) throw Error(ErrorCode::unknown_entry, "no ledger entry with digest " + to_hex(payload_digest));
        return entries_[it->second].payload;
    }

    bool contains(const Digest& payload_digest) const {
        std::shared_lock lock(mu_);
        return by_digest_.count(payload_digest) != 0;
    }

    std::size_t size() const {
        std::shared_lock lock(mu_);
        return entries_.size();
    }

    std::vector<Entry> snapshot() const {
        std::shared_lock lock(mu_);
        return entries_;
    }

    bool verify_chain() const {
        std::shared_lock lock(mu_);
        Digest prev{};
        for (std::size_t i = 0; i < entries_.size(); ++i) {
            const auto& e = entries_[i];
            if (e.index != i || e.prev_digest != prev || e.payload_digest != sha256(e.payload)) return false;
            prev = entry_digest(e);
        }
        return true;
    }

private:
    void push(Entry e) {
        by_digest_.emplace(e.payload_digest, entries_.size());
        entries_.push_back(std::move(e));
    }

    void reindex() {
        by_digest_.clear();
        for (std::size_t i = 0; i < entries_.size(); ++i) by_digest_.emplace(entries_[i].payload_digest, i);
    }

    void persist(const Entry& e) const {
        Bytes record;
        append_u64(record, e.index);
        chamauth::append(record, e.prev_digest);
        chamauth::append(record, e.payload_digest);
        append_field(record, e.payload);
        Bytes framed;
        append_field(framed, record);
        std::ofstream out(*file_, std::ios::binary | std::ios::app);
        out.write(reinterpret_cast<const char*>(framed.data()), static_cast<std::streamsize>(framed.size()));
        if (!out) throw Error(ErrorCode::io, "cannot append to " + file_->string());
    }

    mutable std::shared_mutex mu_;
    std::vector<Entry> entries_;
    std::map<Digest, std::size_t> by_digest_;
    std::optional<std::filesystem::path> file_;
};

/// The IDP's private (real_id, MIT digest) table. File format: one line per
/// record, "<digest hex> <real_id hex>".
class Registry {
public:
    Registry() = default;

    explicit Registry(std::filesystem::path file) : file_(std::move(file)) {
        std::ifstream in(*file_);
        std::string digest_hex, id_hex;
        while (in >> digest_hex >> id_hex) {
            auto d = from_hex(digest_hex);
            if (d.size() != 32) throw Error(ErrorCode::invalid_encoding, "bad registry digest");
            Digest key{};
            std::copy(d.begin(), d.end(), key.begin());
            records_.emplace(key, from_hex(id_hex));
        }
    }

    Registry(const Registry&) = delete;
    Registry& operator=(const Registry&) = delete;

    void insert(const Digest& mit_digest, ByteView real_id) {
        std::unique_lock lock(mu_);
        if (records_.count(mit_digest)) throw Error(ErrorCode::duplicate_identity, "MIT digest already registered");
        records_.emplace(mit_digest, Bytes(real_id.begin(), real_id.end()));
        if (file_) {
            std::ofstream out(*file_, std::ios::app);
            out << to_hex(mit_digest) << ' ' << to_hex(real_id) << '\n';
            if (!out) throw Error(ErrorCode::io, "cannot append to " + file_->string());
        }
    }

    std::optional<Bytes> lookup(const Digest& mit_digest) const {
        std::shared_lock lock(mu_);
        ++lookups_;
        auto it = records_.find(mit_digest);
        if (it == records_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const {
        std::shared_lock lock(mu_);
        return records_.size();
    }

    /// Number of lookup() calls so far.
    std::size_t lookups() const { return lookups_.load(); }

private:
    mutable std::shared_mutex mu_;
    std::map<Digest, Bytes> records_;
    mutable std::atomic<std::size_t> lookups_{0};
    std::optional<std::filesystem::path> file_;
};

}  // namespace chamauth

#endif
