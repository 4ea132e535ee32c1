// Copyright 2026 The rlq Authors
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

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rlq/errors.hpp"

namespace rlq {

/// Doubles are written with 17 significant digits so every value round-trips.
class CsvWriter {
 public:
  using Cell = std::variant<std::string, double, std::uint64_t>;

  explicit CsvWriter(std::vector<std::string> header) : columns_(header.size()) {
    std::vector<Cell> cells(header.begin(), header.end());
    write(cells);
  }

  void row(const std::vector<Cell>& cells) { write(cells); }

  const std::string& str() const { return out_; }
  std::size_t columns() const { return columns_; }

  static std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

 private:
  static std::string escape(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos) return std::string(s);
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + '"';
  }

  void write(const std::vector<Cell>& cells) {
    if (cells.size() != columns_) {
      throw Error("csv row has " + std::to_string(cells.size()) + " cells, expected " +
                  std::to_string(columns_));
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ += ',';
      if (const auto* s = std::get_if<std::string>(&cells[i])) {
        out_ += escape(*s);
      } else if (const auto* d = std::get_if<double>(&cells[i])) {
        out_ += format(*d);
      } else {
        out_ += std::to_string(std::get<std::uint64_t>(cells[i]));
      }
    }
    out_ += '\n';
  }

  std::size_t columns_;
  std::string out_;
};

}  // namespace rlq
