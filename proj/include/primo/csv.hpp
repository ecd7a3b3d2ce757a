// Copyright 2026 The Primo Authors
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

#ifndef PRIMO_CSV_HPP_
#define PRIMO_CSV_HPP_

#include <iosfwd>
#include <string>
#include <vector>

namespace primo::csv {

// Shortest representation that round-trips to the same double.
std::string format_double(double value);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

// Strict numeric table reader: one header line, every row the same width.
Table read(std::istream& in);

void write_row(std::ostream& out, const std::vector<double>& values);
void write_header(std::ostream& out, const std::vector<std::string>& names);

}  // namespace primo::csv

#endif  // PRIMO_CSV_HPP_
