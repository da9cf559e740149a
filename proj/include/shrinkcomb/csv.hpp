// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "shrinkcomb/harness.hpp"

namespace shrinkcomb {

// Sweep records as CSV: header row, UTF-8, LF endings, one row per record,
// columns in SweepRecord field order. Optional fields serialize as empty.
std::string records_to_csv(const std::vector<SweepRecord>& records);
std::vector<SweepRecord> parse_records_csv(const std::string& text);

std::string per_ue_to_csv(const std::vector<PerUeRecord>& records);
std::string traces_to_csv(const std::vector<TraceRecord>& records);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace shrinkcomb
