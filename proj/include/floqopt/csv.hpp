// Copyright 2026 The floqopt authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

namespace floqopt {

// Fixed CSV conventions: time columns carry 6 decimal digits (us), value
// columns use scientific notation with 12 significant digits. Keeping the
// formatting centralized makes output files byte-stable across runs.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path) : out_(path) {
    if (!out_) throw std::runtime_error("cannot open " + path);
  }

  void header(const std::vector<std::string>& names) {
    for (size_t i = 0; i < names.size(); ++i) {
      if (i) out_ << ',';
      out_ << names[i];
    }
    out_ << '\n';
  }

  void time_field(double t_us) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", t_us);
    field(buf);
  }

  void value_field(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.11e", v);
    field(buf);
  }

  void int_field(long v) { field(std::to_string(v)); }

  void end_row() {
    out_ << '\n';
    first_ = true;
  }

 private:
  void field(const std::string& s) {
    if (!first_) out_ << ',';
    out_ << s;
    first_ = false;
  }

  std::ofstream out_;
  bool first_ = true;
};

}  // namespace floqopt
