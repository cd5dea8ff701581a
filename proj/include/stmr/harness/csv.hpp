// Copyright 2026 The stmr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <ctime>
#include <fstream>
#include <string>
#include <vector>

#include "stmr/errors.hpp"

namespace stmr {

inline constexpr const char* kCsvSchemaVersion = "1";

// CSV with a commented metadata block. Comment lines (and only those) may
// differ between reruns; the body is deterministic for a fixed config+seed.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::string& schema_name,
            const std::string& config_hash,
            const std::vector<std::string>& columns,
            const std::vector<std::string>& extra_comments = {})
      : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open output file '" + path + "'");
    out_ << "# stmr csv schema=" << schema_name << " v" << kCsvSchemaVersion
         << "\n";
    out_ << "# config_hash=" << config_hash << "\n";
    out_ << "# written=" << timestamp() << "\n";
    for (const auto& c : extra_comments) out_ << "# " << c << "\n";
    for (size_t i = 0; i < columns.size(); ++i) {
      out_ << (i ? "," : "") << columns[i];
    }
    out_ << "\n";
  }

  void row(const std::vector<double>& values,
           const std::vector<long>& int_values = {}) {
    bool first = true;
    for (double v : values) {
      out_ << (first ? "" : ",") << fmt(v);
      first = false;
    }
    for (long v : int_values) {
      out_ << (first ? "" : ",") << v;
      first = false;
    }
    out_ << "\n";
  }

  void raw_row(const std::string& line) { out_ << line << "\n"; }

  void comment(const std::string& text) { out_ << "# " << text << "\n"; }

  static std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
  }

 private:
  static std::string timestamp() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
  }

  std::ofstream out_;
};

}  // namespace stmr
