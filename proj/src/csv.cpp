// SPDX-License-Identifier: Apache-2.0
#include "shrinkcomb/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace shrinkcomb {

namespace {

constexpr const char* kHeader =
    "method,sweep_kind,sweep_value,trials,symbol_errors,total_symbols,ser,"
    "mean_alpha,mean_iterations,wallclock_s";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = kHeader;
  out.push_back('\n');
  for (const auto& r : records) {
    out += method_name(r.method);
    out += ',' + sweep_kind_name(r.sweep_kind);
    out += ',' + fmt_double(r.sweep_value);
    out += ',' + std::to_string(r.trials);
    out += ',' + std::to_string(r.symbol_errors);
    out += ',' + std::to_string(r.total_symbols);
    out += ',' + fmt_double(r.ser);
    out += ',';
    if (r.mean_alpha) out += fmt_double(*r.mean_alpha);
    out += ',';
    if (r.mean_iterations) out += fmt_double(*r.mean_iterations);
    out += ',' + fmt_double(r.wallclock_s);
    out.push_back('\n');
  }
  return out;
}

std::vector<SweepRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::invalid_argument("csv: missing or unexpected header row");
  }
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != 10) {
      throw std::invalid_argument("csv: expected 10 fields, got line: " + line);
    }
    SweepRecord r;
    r.method = method_from_name(fields[0]);
    r.sweep_kind = sweep_kind_from_name(fields[1]);
    r.sweep_value = std::stod(fields[2]);
    r.trials = std::stol(fields[3]);
    r.symbol_errors = std::stol(fields[4]);
    r.total_symbols = std::stol(fields[5]);
    r.ser = std::stod(fields[6]);
    if (!fields[7].empty()) r.mean_alpha = std::stod(fields[7]);
    if (!fields[8].empty()) r.mean_iterations = std::stod(fields[8]);
    r.wallclock_s = std::stod(fields[9]);
    records.push_back(r);
  }
  return records;
}

std::string per_ue_to_csv(const std::vector<PerUeRecord>& records) {
  std::string out = "method,sweep_value,ue,symbol_errors,total_symbols,ser\n";
  for (const auto& r : records) {
    const double ser = r.total_symbols == 0
                           ? 0.0
                           : static_cast<double>(r.symbol_errors) /
                                 static_cast<double>(r.total_symbols);
    out += method_name(r.method);
    out += ',' + fmt_double(r.sweep_value);
    out += ',' + std::to_string(r.ue);
    out += ',' + std::to_string(r.symbol_errors);
    out += ',' + std::to_string(r.total_symbols);
    out += ',' + fmt_double(ser);
    out.push_back('\n');
  }
  return out;
}

std::string traces_to_csv(const std::vector<TraceRecord>& records) {
  std::string out = "sweep_value,trial,iteration,alpha,mse,beta\n";
  for (const auto& r : records) {
    out += fmt_double(r.sweep_value);
    out += ',' + std::to_string(r.trial);
    out += ',' + std::to_string(r.iteration);
    out += ',' + fmt_double(r.alpha);
    out += ',' + fmt_double(r.mse);
    out += ',' + fmt_double(r.beta);
    out.push_back('\n');
  }
  return out;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace shrinkcomb
