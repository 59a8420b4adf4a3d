#ifndef CHAMAUTH_PROTOCOL_TRANSPORT_HPP
#define CHAMAUTH_PROTOCOL_TRANSPORT_HPP

#include <condition_variable>
#include <deque>
#include <memory>
#include <mutex>
#include <thread>

#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <poll.h>

#include "chamauth/protocol/session.hpp"

namespace chamauth::proto {

/// Ordered, reliable, bidirectional frame stream. No security is assumed.
class Transport {
public:
    virtual ~Transport() = default;
    virtual void send(ByteView frame) = 0;
    /// Blocks for the next complete frame; throws ErrorCode::timeout when
    /// nothing arrives in time and ErrorCode::io when the peer is gone.
    virtual Bytes receive(std::chrono::milliseconds timeout) = 0;
    virtual void close() {}
};

// In-process pipe ----------------------------------------------------------

namespace detail {
struct Channel {
    std::mutex mu;
    std::condition_variable cv;
    std::deque<Bytes> frames;
    bool closed = false;
};
}  // namespace detail

class PipeEnd : public Transport {
public:
    PipeEnd(std::shared_ptr<detail::Channel> in, std::shared_ptr<detail::Channel> out)
        : in_(std::move(in)), out_(std::move(out)) {}
    ~PipeEnd() override { close(); }

    void send(ByteView frame) override {
        std::lock_guard lock(out_->mu);
        if (out_->closed) throw Error(ErrorCode::io, "pipe closed");
        out_->frames.emplace_back(frame.begin(), frame.end());
        out_->cv.notify_all();
    }

    Bytes receive(std::chrono::milliseconds timeout) override {
        std::unique_lock lock(in_->mu);
        if (!in_->cv.wait_for(lock, timeout, [&] { return !in_->frames.empty() || in_->closed; }))
            throw Error(ErrorCode::timeout, "no frame within deadline");
        if (in_->frames.empty()) throw Error(ErrorCode::io, "pipe closed");
        auto f = std::move(in_->frames.front());
        in_->frames.pop_front();
        return f;
    }

    void close() override {
        std::lock_guard lock(out_->mu);
        out_->closed = true;
        out_->cv.notify_all();
    }

private:
    std::shared_ptr<detail::Channel> in_;
    std::shared_ptr<detail::Channel> out_;
};

inline std::pair<std::unique_ptr<PipeEnd>, std::unique_ptr<PipeEnd>> make_pipe() {
    auto ab = std::make_shared<detail::Channel>();
    auto ba = std::make_shared<detail::Channel>();
    return {std::make_unique<PipeEnd>(ba, ab), std::make_unique<PipeEnd>(ab, ba)};
}

// TCP ----------------------------------------------------------------------

class TcpTransport : public Transport {
public:
    explicit TcpTransport(int fd) : fd_(fd) {
        int one = 1;
        ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
    }
    ~TcpTransport() override { close(); }
    TcpTransport(const TcpTransport&) = delete;
    TcpTransport& operator=(const TcpTransport&) = delete;

    static std::unique_ptr<TcpTransport> connect(const std::string& host, std::uint16_t port,
                                                 std::chrono::milliseconds retry_for = std::chrono::seconds(5)) {
        auto deadline = Clock::now() + retry_for;
        for (;;) {
            addrinfo hints{};
            hints.ai_family = AF_UNSPEC;
            hints.ai_socktype = SOCK_STREAM;
            addrinfo* res = nullptr;
            auto port_str = std::to_string(port);
            if (int rc = ::getaddrinfo(host.c_str(), port_str.c_str(), &hints, &res); rc != 0)
                throw Error(ErrorCode::io, std::string("resolve ") + host + ": " + ::gai_strerror(rc));
            int fd = -1;
            for (auto* ai = res; ai; ai = ai->ai_next) {
                fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
                if (fd < 0) continue;
                if (::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) break;
                ::close(fd);
                fd = -1;
            }
            ::freeaddrinfo(res);
            if (fd >= 0) return std::make_unique<TcpTransport>(fd);
            if (Clock::now() >= deadline) throw Error(ErrorCode::io, "cannot connect to " + host + ":" + port_str);
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        }
    }

    void send(ByteView frame) override {
        std::size_t sent = 0;
        while (sent < frame.size()) {
            auto n = ::send(fd_, frame.data() + sent, frame.size() - sent, MSG_NOSIGNAL);
            if (n < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io, std::string("send: ") + std::strerror(errno));
            }
            sent += static_cast<std::size_t>(n);
        }
    }

    Bytes receive(std::chrono::milliseconds timeout) override {
        auto deadline = Clock::now() + timeout;
        Bytes header(4);
        read_exact(header.data(), 4, deadline);
        ByteReader r(header);
        auto len = r.u32();
        if (len < 17 || len > max_frame_size) throw Error(ErrorCode::invalid_encoding, "bad frame length");
        Bytes frame = header;
        frame.resize(4 + len);
        read_exact(frame.data() + 4, len, deadline);
        return frame;
    }

    void close() override {
        if (fd_ >= 0) {
            ::shutdown(fd_, SHUT_RDWR);
            ::close(fd_);
            fd_ = -1;
        }
    }

private:
    void read_exact(std::uint8_t* dst, std::size_t n, Clock::time_point deadline) {
        std::size_t got = 0;
        while (got < n) {
            auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
            if (left <= 0) throw Error(ErrorCode::timeout, "no frame within deadline");
            pollfd p{fd_, POLLIN, 0};
            int rc = ::poll(&p, 1, static_cast<int>(left));
            if (rc < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io, std::string("poll: ") + std::strerror(errno));
            }
            if (rc == 0) throw Error(ErrorCode::timeout, "no frame within deadline");
            auto k = ::recv(fd_, dst + got, n - got, 0);
            if (k == 0) throw Error(ErrorCode::io, "peer closed the connection");
            if (k < 0) {
                if (errno == EINTR) continue;
                throw Error(ErrorCode::io, std::string("recv: ") + std::strerror(errno));
            }
            got += static_cast<std::size_t>(k);
        }
    }

    int fd_;
};

/// Listening socket that hands out one peer connection at a time.
class TcpListener {
public:
    /// port 0 picks an ephemeral port; see port().
    explicit TcpListener(std::uint16_t port, const std::string& bind_host = "127.0.0.1") {
        addrinfo hints{};
        hints.ai_family = AF_UNSPEC;
        hints.ai_socktype = SOCK_STREAM;
        hints.ai_flags = AI_PASSIVE;
        addrinfo* res = nullptr;
        auto port_str = std::to_string(port);
        if (int rc = ::getaddrinfo(bind_host.c_str(), port_str.c_str(), &hints, &res); rc != 0)
            throw Error(ErrorCode::io, std::string("resolve ") + bind_host + ": " + ::gai_strerror(rc));
        for (auto* ai = res; ai; ai = ai->ai_next) {
            fd_ = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
            if (fd_ < 0) continue;
            int one = 1;
            ::setsockopt(fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
            if (::bind(fd_, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(fd_, 1) == 0) break;
            ::close(fd_);
            fd_ = -1;
        }
        ::freeaddrinfo(res);
        if (fd_ < 0) throw Error(ErrorCode::io, "cannot listen on " + bind_host + ":" + port_str);
    }
    ~TcpListener() {
        if (fd_ >= 0) ::close(fd_);
    }
    TcpListener(const TcpListener&) = delete;
    TcpListener& operator=(const TcpListener&) = delete;

    std::uint16_t port() const {
        sockaddr_storage ss{};
        socklen_t len = sizeof ss;
        ::getsockname(fd_, reinterpret_cast<sockaddr*>(&ss), &len);
        if (ss.ss_family == AF_INET6) return ntohs(reinterpret_cast<sockaddr_in6*>(&ss)->sin6_port);
        return ntohs(reinterpret_cast<sockaddr_in*>(&ss)->sin_port);
    }

    std::unique_ptr<TcpTransport> accept(std::chrono::milliseconds timeout) {
        pollfd p{fd_, POLLIN, 0};
        int rc = ::poll(&p, 1, static_cast<int>(timeout.count()));
        if (rc == 0) throw Error(ErrorCode::timeout, "no peer connected");
        if (rc < 0) throw Error(ErrorCode::io, std::string("poll: ") + std::strerror(errno));
        int fd = ::accept(fd_, nullptr, nullptr);
        if (fd < 0) throw Error(ErrorCode::io, std::string("accept: ") + std::strerror(errno));
        return std::make_unique<TcpTransport>(fd);
    }

private:
    int fd_ = -1;
};

// Drivers ------------------------------------------------------------------

/// Feeds received frames to an endpoint until it accepts or aborts.
inline void pump(Endpoint& ep, Transport& t, std::chrono::milliseconds receive_timeout = std::chrono::seconds(30)) {
    while (!ep.done()) {
        Bytes frame;
        try {
            frame = t.receive(receive_timeout);
        } catch (const Error&) {
            // Silent or vanished peer: abort locally, tell the peer if we still can.
            for (auto& f : ep.on_timeout()) {
                try {
                    t.send(f);
                } catch (const Error&) {
                }
            }
            return;
        }
        for (auto& f : ep.on_frame(frame)) t.send(f);
    }
}

/// Runs one endpoint over a transport from its first message to the end.
inline void drive(Endpoint& ep, Transport& t, std::chrono::milliseconds receive_timeout = std::chrono::seconds(30)) {
    for (auto& f : ep.start()) t.send(f);
    pump(ep, t, receive_timeout);
}

/// Both endpoints on their own threads over an in-process pipe.
inline void run_threaded(Endpoint& a, Endpoint& b,
                         std::chrono::milliseconds receive_timeout = std::chrono::seconds(30)) {
    auto [ta, tb] = make_pipe();
    std::exception_ptr err;
    std::thread peer([&, tb = tb.get()] {
        try {
            drive(b, *tb, receive_timeout);
        } catch (...) {
            err = std::current_exception();
        }
    });
    drive(a, *ta, receive_timeout);
    peer.join();
    if (err) std::rethrow_exception(err);
}

enum class Direction { a_to_b, b_to_a };

/// Optional interference with a frame in flight; return false to drop it.
using FrameHook = std::function<bool(Direction, Bytes&)>;

struct Delivery {
    Direction dir;
    Bytes frame;
};

/// Deterministic single-threaded delivery: a starts, frames are shuttled
/// in order until both sides stop producing. Returns what was delivered.
inline std::vector<Delivery> run_in_memory(Endpoint& a, Endpoint& b, const FrameHook& hook = {}) {
    std::deque<Delivery> queue;
    std::vector<Delivery> log;
    auto enqueue = [&](Direction d, std::vector<Bytes> frames) {
        for (auto& f : frames) {
            if (hook && !hook(d, f)) continue;
            queue.push_back({d, std::move(f)});
        }
    };
    enqueue(Direction::a_to_b, a.start());
    while (!queue.empty()) {
        auto d = std::move(queue.front());
        queue.pop_front();
        log.push_back(d);
        if (d.dir == Direction::a_to_b)
            enqueue(Direction::b_to_a, b.on_frame(d.frame));
        else
            enqueue(Direction::a_to_b, a.on_frame(d.frame));
    }
    return log;
}

/// One hex-encoded frame per line.
inline std::string dump_transcript(const std::vector<Bytes>& frames) {
    std::string out;
    for (const auto& f : frames) {
        out += to_hex(f);
        out += '\n';
    }
    return out;
}

}  // namespace chamauth::proto

#endif
