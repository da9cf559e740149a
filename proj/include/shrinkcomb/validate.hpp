// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <iosfwd>

namespace shrinkcomb {

// Reduced-size property suite across all modules, printing one line per
// check. Returns the number of failed checks.
int run_validation(std::uint64_t seed, std::ostream& out, std::ostream& err);

}  // namespace shrinkcomb
