// Copyright 2026 The mmbell Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "mmbell/scalar.hpp"

namespace mmbell {

using Cell = std::variant<long long, double, Rational, std::string>;

enum class TableFormat { csv, json };

/// Column-named rows with typed cells; the writers below render every cell
/// type deterministically (identical table -> byte-identical output).
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  /// Throws std::logic_error when the row width differs from the header.
  void add_row(std::vector<Cell> row);
};

/// 15 significant digits, shortest C locale rendering ("0.75", "2.8284...").
std::string fmt_double(double v);

/// Header row then data rows, '\n' endings, minimal RFC-style quoting.
void write_csv(const Table& table, std::ostream& out);

/// Array of one object per row, same keys as the CSV header; rationals are
/// quoted "num/den" strings, floats plain JSON numbers.
void write_json(const Table& table, std::ostream& out);

void write_table(const Table& table, TableFormat format, std::ostream& out);

}  // namespace mmbell
