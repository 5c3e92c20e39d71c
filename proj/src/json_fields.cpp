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

#include "ionreg/json_fields.hpp"

namespace ionreg {

namespace {
const nlohmann::json kNull;
}

FieldReader::FieldReader(const nlohmann::json &object, std::string path, std::vector<std::string> &violations)
    : object_(object), path_(std::move(path)), violations_(violations) {
    if (!object_.is_object()) {
        violations_.push_back((path_.empty() ? std::string("/") : path_) + ": expected a JSON object");
        object_ok_ = false;
    }
}

bool FieldReader::has(const std::string &name) const { return object_ok_ && object_.contains(name); }

const nlohmann::json *FieldReader::lookup(const std::string &name) {
    seen_.insert(name);
    if (!object_ok_) return nullptr;
    auto it = object_.find(name);
    if (it == object_.end()) return nullptr;
    return &*it;
}

void FieldReader::violation(const std::string &name, const std::string &message) {
    violations_.push_back(field_path(name) + ": " + message);
}

double FieldReader::number(const std::string &name, double fallback) {
    const auto *v = lookup(name);
    if (!v) return fallback;
    if (!v->is_number()) {
        violation(name, "expected a number");
        return fallback;
    }
    return v->get<double>();
}

std::int64_t FieldReader::integer(const std::string &name, std::int64_t fallback) {
    const auto *v = lookup(name);
    if (!v) return fallback;
    if (!v->is_number_integer()) {
        violation(name, "expected an integer");
        return fallback;
    }
    return v->get<std::int64_t>();
}

std::uint64_t FieldReader::unsigned_integer(const std::string &name, std::uint64_t fallback) {
    const auto *v = lookup(name);
    if (!v) return fallback;
    if (v->is_number_unsigned()) return v->get<std::uint64_t>();
    if (v->is_number_integer()) {
        if (v->get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v->get<std::int64_t>());
        violation(name, "must be nonnegative, got " + v->dump());
        return fallback;
    }
    violation(name, "expected a nonnegative integer");
    return fallback;
}

bool FieldReader::boolean(const std::string &name, bool fallback) {
    const auto *v = lookup(name);
    if (!v) return fallback;
    if (!v->is_boolean()) {
        violation(name, "expected true or false");
        return fallback;
    }
    return v->get<bool>();
}

std::string FieldReader::string(const std::string &name, const std::string &fallback) {
    const auto *v = lookup(name);
    if (!v) return fallback;
    if (!v->is_string()) {
        violation(name, "expected a string");
        return fallback;
    }
    return v->get<std::string>();
}

std::vector<double> FieldReader::numbers(const std::string &name, const std::vector<double> &fallback) {
    const auto *v = lookup(name);
    if (!v) return fallback;
    if (!v->is_array()) {
        violation(name, "expected an array of numbers");
        return fallback;
    }
    std::vector<double> out;
    for (const auto &e : *v) {
        if (!e.is_number()) {
            violation(name, "expected an array of numbers");
            return fallback;
        }
        out.push_back(e.get<double>());
    }
    return out;
}

const nlohmann::json &FieldReader::object(const std::string &name) {
    const auto *v = lookup(name);
    if (!v) return kNull;
    if (!v->is_object()) {
        violation(name, "expected a JSON object");
        return kNull;
    }
    return *v;
}

void FieldReader::require(bool condition, const std::string &name, const std::string &message) {
    if (!condition) violation(name, message);
}

void FieldReader::reject_unknown() {
    if (!object_ok_) return;
    for (const auto &[key, value] : object_.items()) {
        if (!seen_.count(key)) violation(key, "unknown field");
    }
}

}  // namespace ionreg
