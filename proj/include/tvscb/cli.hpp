#pragma once

#include <cstdint>
#include <iosfwd>

namespace tvscb {

/// Exit codes: 0 ok, 1 numeric failure, 2 usage or input error.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Seed from $TVSCB_SEED when set, else the documented default.
std::uint64_t default_seed();

}  // namespace tvscb
