#pragma once

#include <cstdint>
#include <iosfwd>

namespace fracmatch {

/// Fast deterministic property suite (under two minutes): arithmetic
/// identities, enclosure soundness samples, filter/exact agreement, LP
/// certificate round-trips, and a gradient check. Prints one line per check;
/// returns the number of failed checks.
int run_selftest(std::ostream& out, std::uint64_t seed);

}  // namespace fracmatch
