// Copyright 2026 The pieceattack Authors.
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

#include "testing/json_schema.h"

#include <fstream>
#include <stdexcept>

#include "pieceattack/utf8.h"

namespace pieceattack::testing {
namespace {

bool HasType(const nlohmann::json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "boolean") return value.is_boolean();
  if (type == "integer") return value.is_number_integer();
  if (type == "number") return value.is_number();
  if (type == "null") return value.is_null();
  throw std::invalid_argument("unsupported schema type " + type);
}

}  // namespace

std::vector<std::string> SchemaViolations(const nlohmann::json& schema,
                                          const nlohmann::json& value,
                                          const std::string& where) {
  std::vector<std::string> out;
  auto add = [&](const std::string& msg) { out.push_back(where + ": " + msg); };
  if (schema.contains("type")) {
    const std::string type = schema["type"];
    if (!HasType(value, type)) {
      add("expected " + type);
      return out;
    }
  }
  if (schema.contains("minimum") && value.is_number() &&
      value.get<double>() < schema["minimum"].get<double>()) {
    add("below minimum");
  }
  if (schema.contains("minLength") && value.is_string() &&
      utf8::CountChars(value.get<std::string>()) <
          schema["minLength"].get<size_t>()) {
    add("string too short");
  }
  if (value.is_array()) {
    if (schema.contains("minItems") &&
        value.size() < schema["minItems"].get<size_t>()) {
      add("too few items");
    }
    if (schema.contains("items")) {
      for (size_t i = 0; i < value.size(); ++i) {
        auto sub = SchemaViolations(schema["items"], value[i],
                                    where + "[" + std::to_string(i) + "]");
        out.insert(out.end(), sub.begin(), sub.end());
      }
    }
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const std::string& key : schema["required"]) {
        if (!value.contains(key)) add("missing '" + key + "'");
      }
    }
    const nlohmann::json properties =
        schema.value("properties", nlohmann::json::object());
    for (const auto& [key, child] : value.items()) {
      if (properties.contains(key)) {
        auto sub = SchemaViolations(properties[key], child, where + "." + key);
        out.insert(out.end(), sub.begin(), sub.end());
      } else if (schema.contains("additionalProperties") &&
                 schema["additionalProperties"] == false) {
        add("unexpected '" + key + "'");
      }
    }
  }
  return out;
}

nlohmann::json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return nlohmann::json::parse(in);
}

}  // namespace pieceattack::testing
