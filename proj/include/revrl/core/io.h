// Copyright 2026 The revrl Authors
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

#ifndef REVRL_CORE_IO_H_
#define REVRL_CORE_IO_H_

#include <string>
#include <string_view>
#include <vector>

namespace revrl {

// Writes to a sibling temporary file and renames it over `path`, so readers
// never observe a partial file. Creates parent directories.
void write_file_atomic(const std::string& path, std::string_view contents);

std::string read_file(const std::string& path);

// Shortest decimal form that round-trips to the same double.
std::string format_real(double v);

// Minimal CSV builder. Fields are written verbatim; callers only pass
// numbers and identifiers.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  CsvTable& row(std::vector<std::string> fields);
  std::size_t rows() const { return rows_.size(); }
  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& data() const { return rows_; }

  std::string str() const;
  void write(const std::string& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace revrl

#endif  // REVRL_CORE_IO_H_
