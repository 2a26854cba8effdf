// Copyright 2026 The Bellgate Authors
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

// Operator file format:
//
//   {"dims":[d1,...,dk], "entries":[[re,im],...]}
//
// Entries are row-major over the full side prod(dims). Slot 1 is the
// leftmost, slowest-varying index. Numbers are written with 17 significant
// digits so that a read-back reproduces every double exactly.

#ifndef BELLGATE_OPERATOR_IO_HPP
#define BELLGATE_OPERATOR_IO_HPP

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "bellgate/tensor_core.hpp"
#include <nlohmann/json.hpp>

namespace bellgate {

inline std::string format_double(double x) {
  if (x == 0.0) return "0";  // folds -0 as well
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline void append_operator_json(std::string& out, const TensorOperator& t) {
  out += "{\"dims\":[";
  for (std::size_t i = 0; i < t.dims().size(); ++i) {
    if (i) out += ',';
    out += std::to_string(t.dims()[i]);
  }
  out += "],\"entries\":[";
  bool first = true;
  for (const Complex& z : t.entries()) {
    if (!first) out += ',';
    first = false;
    out += '[';
    out += format_double(z.real());
    out += ',';
    out += format_double(z.imag());
    out += ']';
  }
  out += "]}";
}

inline std::string operator_to_json(const TensorOperator& t) {
  std::string s;
  append_operator_json(s, t);
  return s;
}

inline TensorOperator operator_from_json(const nlohmann::json& j) {
  try {
    if (!j.is_object() || !j.contains("dims") || !j.contains("entries")) {
      throw ValidationError("operator JSON: expected object with \"dims\" and \"entries\"");
    }
    Dims dims;
    for (const auto& d : j.at("dims")) {
      const auto v = d.get<std::int64_t>();
      if (v < 1) throw ValidationError("operator JSON: factor dimension must be >= 1");
      dims.push_back(static_cast<std::size_t>(v));
    }
    std::vector<Complex> entries;
    entries.reserve(j.at("entries").size());
    for (const auto& e : j.at("entries")) {
      if (!e.is_array() || e.size() != 2) throw ValidationError("operator JSON: entry must be [re, im]");
      entries.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return {std::move(dims), std::move(entries)};
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("operator JSON: ") + ex.what());
  }
}

inline TensorOperator operator_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError(std::string("operator JSON: ") + ex.what());
  }
  return operator_from_json(j);
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline nlohmann::json read_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ValidationError("malformed JSON in '" + path + "': " + ex.what());
  }
}

/// 64-bit FNV-1a of the operator's serialized form, as 16 hex digits.
inline std::string operator_hash(const TensorOperator& t) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : operator_to_json(t)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace bellgate

#endif  // BELLGATE_OPERATOR_IO_HPP
