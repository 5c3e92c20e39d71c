// Copyright 2026 The ionreg Authors
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

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

namespace ionreg {

/// Reads typed fields out of one JSON object while collecting violations
/// (as "<path>/<field>: <problem>") instead of throwing, so a whole config
/// file can be checked in one pass.
class FieldReader {
  public:
    FieldReader(const nlohmann::json &object, std::string path, std::vector<std::string> &violations);

    bool ok() const { return object_ok_; }
    bool has(const std::string &name) const;

    double number(const std::string &name, double fallback);
    std::int64_t integer(const std::string &name, std::int64_t fallback);
    std::uint64_t unsigned_integer(const std::string &name, std::uint64_t fallback);
    bool boolean(const std::string &name, bool fallback);
    std::string string(const std::string &name, const std::string &fallback);
    std::vector<double> numbers(const std::string &name, const std::vector<double> &fallback);
    /// Sub-object; a null json when absent or malformed.
    const nlohmann::json &object(const std::string &name);

    void require(bool condition, const std::string &name, const std::string &message);
    std::string field_path(const std::string &name) const { return path_ + "/" + name; }

    /// Reports every key that no accessor asked for.
    void reject_unknown();

  private:
    const nlohmann::json *lookup(const std::string &name);
    void violation(const std::string &name, const std::string &message);

    const nlohmann::json &object_;
    std::string path_;
    std::vector<std::string> &violations_;
    std::set<std::string> seen_;
    bool object_ok_ = true;
};

}  // namespace ionreg
