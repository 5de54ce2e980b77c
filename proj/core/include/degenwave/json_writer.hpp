// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace degenwave {

// Minimal JSON emitter with insertion-ordered objects and %.17g floats, so
// identical runs produce byte-identical reports. Non-finite doubles are
// emitted as the strings "inf", "-inf", "nan".
class JsonValue {
 public:
  JsonValue() : node_(nullptr) {}
  JsonValue(bool b) : node_(b) {}
  JsonValue(int i) : node_(static_cast<long long>(i)) {}
  JsonValue(long long i) : node_(i) {}
  JsonValue(size_t i) : node_(static_cast<long long>(i)) {}
  JsonValue(double d) : node_(d) {}
  JsonValue(const char* s) : node_(std::string(s)) {}
  JsonValue(std::string s) : node_(std::move(s)) {}

  static JsonValue object();
  static JsonValue array();

  JsonValue& set(const std::string& key, JsonValue v);  // object insert/replace
  JsonValue& push(JsonValue v);                         // array append

  std::string dump(int indent = 2) const;

 private:
  struct Object {
    std::vector<std::pair<std::string, JsonValue>> items;
  };
  struct Array {
    std::vector<JsonValue> items;
  };
  using Node = std::variant<std::nullptr_t, bool, long long, double, std::string,
                            std::shared_ptr<Object>, std::shared_ptr<Array>>;

  void write(std::string& out, int indent, int depth) const;

  Node node_;
};

std::string format_double(double v);  // %.17g with non-finite guards

}  // namespace degenwave
