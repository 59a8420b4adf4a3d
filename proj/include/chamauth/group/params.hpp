#ifndef CHAMAUTH_GROUP_PARAMS_HPP
#define CHAMAUTH_GROUP_PARAMS_HPP

#include <string>

#include "chamauth/common.hpp"
#include "chamauth/crypto.hpp"

namespace chamauth {

/// Public system parameters: which group, its prime order, and the
/// hash-to-group configuration.
struct SystemParams {
    std::string group_id;
    std::string backend;
    std::string order_hex;
    unsigned security_bits = 0;
    std::string hash_dst;
};

}  // namespace chamauth

#endif
