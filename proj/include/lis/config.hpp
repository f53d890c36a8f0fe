// SPDX-License-Identifier: Apache-2.0
//
// lis-assign: user assignment for distributed large intelligent surfaces
// Copyright (C) 2026 The lis-assign authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "lis/scenario.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lis
{

// Flat "key = value" document. '#' starts a comment; blank lines are
// ignored; a key may repeat (e.g. one `user` line per user).
class KeyValueDocument
{
public:
    struct Entry
    {
        std::string key;
        std::string value;
        std::size_t line = 0;
    };

    static KeyValueDocument parse(std::istream &in, std::string source = "<input>");
    static KeyValueDocument load(const std::filesystem::path &path);

    bool contains(std::string_view key) const;
    std::optional<std::string> get(std::string_view key) const; // last occurrence
    std::vector<Entry> all(std::string_view key) const;

    // Typed getters; a present but malformed value throws lis::domain_error
    // naming the source and line.
    std::optional<double> get_double(std::string_view key) const;
    std::optional<std::size_t> get_size(std::string_view key) const;
    std::optional<std::uint64_t> get_u64(std::string_view key) const;
    std::optional<bool> get_bool(std::string_view key) const;
    std::optional<std::vector<double>> get_doubles(std::string_view key, std::size_t expected = 0) const;

    // Throws on any key not in `known`.
    void require_known(std::span<const std::string_view> known) const;
    void require_known(std::initializer_list<std::string_view> known) const
    {
        require_known(std::span<const std::string_view>(known.begin(), known.size()));
    }

    const std::vector<Entry> &entries() const { return entries_; }
    const std::string &source() const { return source_; }

    [[noreturn]] void fail(const Entry &entry, const std::string &what) const;

private:
    const Entry *last(std::string_view key) const;

    std::string source_;
    std::vector<Entry> entries_;
};

std::vector<double> parse_doubles(std::string_view text);

// Scenario keys: M, K, L, lambda, n0, power_db, user_box, hall, seed, user.
inline constexpr std::array<std::string_view, 10> scenario_keys{"M",        "K",        "L",    "lambda", "n0",
                                                                "power_db", "user_box", "hall", "seed",   "user"};

struct ScenarioFile
{
    ScenarioConfig config;
    std::uint64_t seed = 1;
    std::vector<User> explicit_users; // from `user = x y z [power_db]` lines

    // Explicit users when given, otherwise a sample drawn from `seed`.
    Scenario build() const;
};

// Reads scenario keys on top of `defaults`; other keys are left to the caller.
ScenarioFile scenario_file_from(const KeyValueDocument &doc, ScenarioConfig defaults = {});

} // namespace lis
