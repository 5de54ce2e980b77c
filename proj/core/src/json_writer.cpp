// Copyright (c) 2026 the degenwave authors
// SPDX-License-Identifier: Apache-2.0
#include "degenwave/json_writer.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace degenwave {

std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.node_ = std::make_shared<Object>();
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.node_ = std::make_shared<Array>();
  return v;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  auto obj = std::get_if<std::shared_ptr<Object>>(&node_);
  if (!obj) throw std::logic_error("JsonValue::set on a non-object");
  for (auto& [k, existing] : (*obj)->items) {
    if (k == key) {
      existing = std::move(v);
      return *this;
    }
  }
  (*obj)->items.emplace_back(key, std::move(v));
  return *this;
}

JsonValue& JsonValue::push(JsonValue v) {
  auto arr = std::get_if<std::shared_ptr<Array>>(&node_);
  if (!arr) throw std::logic_error("JsonValue::push on a non-array");
  (*arr)->items.push_back(std::move(v));
  return *this;
}

namespace {

void write_escaped(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
}

}  // namespace

void JsonValue::write(std::string& out, int indent, int depth) const {
  const std::string pad(static_cast<size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<size_t>(indent) * (depth + 1), ' ');
  if (std::holds_alternative<std::nullptr_t>(node_)) {
    out += "null";
  } else if (auto b = std::get_if<bool>(&node_)) {
    out += *b ? "true" : "false";
  } else if (auto i = std::get_if<long long>(&node_)) {
    out += std::to_string(*i);
  } else if (auto d = std::get_if<double>(&node_)) {
    out += format_double(*d);
  } else if (auto s = std::get_if<std::string>(&node_)) {
    write_escaped(out, *s);
  } else if (auto obj = std::get_if<std::shared_ptr<Object>>(&node_)) {
    if ((*obj)->items.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    for (size_t k = 0; k < (*obj)->items.size(); ++k) {
      out += pad_in;
      write_escaped(out, (*obj)->items[k].first);
      out += ": ";
      (*obj)->items[k].second.write(out, indent, depth + 1);
      if (k + 1 < (*obj)->items.size()) out += ',';
      out += '\n';
    }
    out += pad + "}";
  } else if (auto arr = std::get_if<std::shared_ptr<Array>>(&node_)) {
    if ((*arr)->items.empty()) {
      out += "[]";
      return;
    }
    out += "[\n";
    for (size_t k = 0; k < (*arr)->items.size(); ++k) {
      out += pad_in;
      (*arr)->items[k].write(out, indent, depth + 1);
      if (k + 1 < (*arr)->items.size()) out += ',';
      out += '\n';
    }
    out += pad + "]";
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  write(out, indent, 0);
  out += '\n';
  return out;
}

}  // namespace degenwave
