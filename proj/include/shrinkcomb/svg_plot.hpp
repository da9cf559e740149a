// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "shrinkcomb/harness.hpp"

namespace shrinkcomb {

// Log-scale SER versus sweep value, one polyline per method present.
std::string records_to_svg(const std::vector<SweepRecord>& records);

}  // namespace shrinkcomb
