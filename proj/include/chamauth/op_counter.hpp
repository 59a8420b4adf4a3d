#ifndef CHAMAUTH_OP_COUNTER_HPP
#define CHAMAUTH_OP_COUNTER_HPP

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>

namespace chamauth {

enum class Op { e1, e2, et, m1, pairing };

/// Group-operation tallies in the cost model used for the chameleon scheme:
/// exponentiations in G1/G2/GT, multiplications (or divisions) in G1, pairings.
struct OpCounts {
    std::uint64_t e1 = 0;
    std::uint64_t e2 = 0;
    std::uint64_t et = 0;
    std::uint64_t m1 = 0;
    std::uint64_t p = 0;

    friend bool operator==(const OpCounts&, const OpCounts&) = default;

    OpCounts& operator+=(const OpCounts& o) {
        e1 += o.e1;
        e2 += o.e2;
        et += o.et;
        m1 += o.m1;
        p += o.p;
        return *this;
    }

    friend OpCounts operator+(OpCounts a, const OpCounts& b) { return a += b; }

    friend OpCounts operator-(const OpCounts& a, const OpCounts& b) {
        return {a.e1 - b.e1, a.e2 - b.e2, a.et - b.et, a.m1 - b.m1, a.p - b.p};
    }

    std::uint64_t count(Op op) const {
        switch (op) {
            case Op::e1: return e1;
            case Op::e2: return e2;
            case Op::et: return et;
            case Op::m1: return m1;
            case Op::pairing: return p;
        }
        return 0;
    }

    /// Renders as e.g. "5 M1 + 8 P + 2 E1", terms in the given order, zero
    /// terms omitted, "--" when empty.
    std::string to_string(std::initializer_list<Op> order = {Op::m1, Op::pairing, Op::e1, Op::e2, Op::et}) const {
        static constexpr const char* symbols[] = {"E1", "E2", "ET", "M1", "P"};
        std::string out;
        for (auto op : order) {
            auto n = count(op);
            if (n == 0) continue;
            if (!out.empty()) out += " + ";
            out += std::to_string(n) + " " + symbols[static_cast<int>(op)];
        }
        return out.empty() ? "--" : out;
    }

    friend std::ostream& operator<<(std::ostream& os, const OpCounts& c) { return os << c.to_string(); }
};

namespace detail {
struct CounterState {
    OpCounts tally;
    int suspended = 0;
};

inline CounterState& counter_state() {
    thread_local CounterState state;
    return state;
}
}  // namespace detail

/// Called by group backends for every costed operation.
inline void record_op(Op op) {
    auto& st = detail::counter_state();
    if (st.suspended > 0) return;
    switch (op) {
        case Op::e1: ++st.tally.e1; break;
        case Op::e2: ++st.tally.e2; break;
        case Op::et: ++st.tally.et; break;
        case Op::m1: ++st.tally.m1; break;
        case Op::pairing: ++st.tally.p; break;
    }
}

/// Measurement scope on the current thread. Counts are the operations
/// recorded on this thread since construction (or the last reset).
class CountScope {
public:
    CountScope() : start_(detail::counter_state().tally) {}

    OpCounts counts() const { return detail::counter_state().tally - start_; }
    void reset() { start_ = detail::counter_state().tally; }

private:
    OpCounts start_;
};

/// Operations executed while an UncountedScope is alive are not recorded.
class UncountedScope {
public:
    UncountedScope() { ++detail::counter_state().suspended; }
    ~UncountedScope() { --detail::counter_state().suspended; }
    UncountedScope(const UncountedScope&) = delete;
    UncountedScope& operator=(const UncountedScope&) = delete;
};

}  // namespace chamauth

#endif
