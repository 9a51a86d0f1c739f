/*
 * Copyright 2026 The acger Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Line-oriented text helpers shared by the file loaders.

#pragma once

#include <charconv>
#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "acger/data.hpp"
#include "acger/error.hpp"

namespace acger {

class LineReader {
 public:
  explicit LineReader(const std::string& path, bool keep_comments = false)
    : path_(path), in_(path), keep_comments_(keep_comments) {
    if (!in_) {
      throw_io("cannot open '" + path + "'");
    }
  }

  // Next non-blank line with trailing CR stripped. Comment lines (leading '#')
  // are skipped unless keep_comments was requested.
  bool next(std::string_view& out) {
    while (std::getline(in_, buf_)) {
      ++line_;
      if (!buf_.empty() && buf_.back() == '\r') buf_.pop_back();
      if (buf_.find_first_not_of(" \t") == std::string::npos) continue;
      if (!keep_comments_ && buf_.front() == '#') continue;
      out = buf_;
      return true;
    }
    return false;
  }

  std::size_t line_number() const noexcept { return line_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::string buf_;
  std::size_t line_ = 0;
  bool keep_comments_;
};

inline std::vector<std::string_view> split_char(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

inline std::vector<std::string_view> split_tabs(std::string_view s) {
  return split_char(s, '\t');
}

inline std::uint64_t parse_uint(std::string_view s, const std::string& what) {
  std::uint64_t v = 0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw_data(what + ": expected a non-negative integer, got '" + std::string(s) + "'");
  }
  return v;
}

inline std::uint32_t parse_u32(std::string_view s, const std::string& what) {
  const auto v = parse_uint(s, what);
  if (v > 0xffffffffULL) {
    throw_data(what + ": value too large");
  }
  return static_cast<std::uint32_t>(v);
}

inline double parse_double(std::string_view s, const std::string& what) {
  double v = 0.0;
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw_data(what + ": expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

// `# users=N events=M groups=S`
inline bool parse_universe_header(std::string_view line, Universe& out) {
  std::string_view rest = line.substr(1);
  bool any = false;
  Universe u;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    while (pos < rest.size() && rest[pos] == ' ') ++pos;
    const auto end = rest.find(' ', pos);
    const auto tok = rest.substr(pos, end == std::string_view::npos ? rest.size() - pos : end - pos);
    pos = end == std::string_view::npos ? rest.size() : end;
    const auto eq = tok.find('=');
    if (eq == std::string_view::npos) continue;
    const auto key = tok.substr(0, eq);
    const auto val = tok.substr(eq + 1);
    std::uint64_t v = 0;
    auto r = std::from_chars(val.data(), val.data() + val.size(), v);
    if (r.ec != std::errc()) continue;
    if (key == "users") {
      u.users = v;
      any = true;
    } else if (key == "events") {
      u.events = v;
      any = true;
    } else if (key == "groups") {
      u.groups = v;
      any = true;
    }
  }
  if (any) out = u;
  return any;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw_io("cannot write '" + path + "'");
  }
  out << content;
  if (!out) {
    throw_io("failed writing '" + path + "'");
  }
}

}  // namespace acger
