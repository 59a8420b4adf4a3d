#ifndef CHAMAUTH_CHAMAUTH_HPP
#define CHAMAUTH_CHAMAUTH_HPP

#include "chamauth/biometric.hpp"
#include "chamauth/chameleon.hpp"
#include "chamauth/group/group.hpp"
#include "chamauth/identity.hpp"
#include "chamauth/ledger.hpp"
#include "chamauth/protocol/one_party.hpp"
#include "chamauth/protocol/transport.hpp"
#include "chamauth/protocol/two_party.hpp"
#include "chamauth/simulation.hpp"
#include "chamauth/tracing.hpp"
#include "chamauth/verifier.hpp"

#endif
