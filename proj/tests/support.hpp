#ifndef CHAMAUTH_TESTS_SUPPORT_HPP
#define CHAMAUTH_TESTS_SUPPORT_HPP

#include <string>

#include <gtest/gtest.h>

#include "world.hpp"

namespace chamauth::testing {

struct CurveBackend {
    using Group = CurveGroup;
    static Group make() { return setup(128); }
};

/// Large-prime toy backend for property tests: random elements essentially
/// never collide, so negative cases behave like the real group.
struct ToyBackend {
    using Group = ToyGroup;
    static Group make() { return toy_setup(mersenne61); }
};

using Backends = ::testing::Types<CurveBackend, ToyBackend>;

struct BackendNames {
    template <class T>
    static std::string GetName(int) {
        if constexpr (std::is_same_v<T, CurveBackend>) return "curve";
        return "toy";
    }
};

}  // namespace chamauth::testing

#endif
