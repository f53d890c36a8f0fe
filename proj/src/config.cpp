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

#include "lis/config.hpp"
#include "lis/errors.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace lis
{

namespace
{

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

template <class T>
std::optional<T> parse_number(std::string_view text)
{
    text = trim(text);
    T value{};
    const auto *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return value;
}

} // namespace

std::vector<double> parse_doubles(std::string_view text)
{
    std::vector<double> out;
    std::string normalized(text);
    std::replace(normalized.begin(), normalized.end(), ',', ' ');
    std::istringstream in(normalized);
    std::string token;
    while (in >> token)
    {
        auto v = parse_number<double>(token);
        if (!v)
            throw domain_error("not a number: '" + token + "'");
        out.push_back(*v);
    }
    return out;
}

KeyValueDocument KeyValueDocument::parse(std::istream &in, std::string source)
{
    KeyValueDocument doc;
    doc.source_ = std::move(source);
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw))
    {
        ++line_no;
        std::string_view line(raw);
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw domain_error(doc.source_ + ":" + std::to_string(line_no) + ": expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        if (key.empty())
            throw domain_error(doc.source_ + ":" + std::to_string(line_no) + ": empty key");
        doc.entries_.push_back({std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
    }
    return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file '" + path.string() + "'");
    return parse(in, path.string());
}

const KeyValueDocument::Entry *KeyValueDocument::last(std::string_view key) const
{
    for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
        if (it->key == key)
            return &*it;
    return nullptr;
}

bool KeyValueDocument::contains(std::string_view key) const { return last(key) != nullptr; }

std::optional<std::string> KeyValueDocument::get(std::string_view key) const
{
    if (const auto *e = last(key))
        return e->value;
    return std::nullopt;
}

std::vector<KeyValueDocument::Entry> KeyValueDocument::all(std::string_view key) const
{
    std::vector<Entry> out;
    for (const auto &e : entries_)
        if (e.key == key)
            out.push_back(e);
    return out;
}

void KeyValueDocument::fail(const Entry &entry, const std::string &what) const
{
    throw domain_error(source_ + ":" + std::to_string(entry.line) + ": " + entry.key + ": " + what);
}

std::optional<double> KeyValueDocument::get_double(std::string_view key) const
{
    const auto *e = last(key);
    if (!e)
        return std::nullopt;
    auto v = parse_number<double>(e->value);
    if (!v)
        fail(*e, "expected a number, got '" + e->value + "'");
    return v;
}

std::optional<std::size_t> KeyValueDocument::get_size(std::string_view key) const
{
    const auto *e = last(key);
    if (!e)
        return std::nullopt;
    auto v = parse_number<std::size_t>(e->value);
    if (!v)
        fail(*e, "expected a non-negative integer, got '" + e->value + "'");
    return v;
}

std::optional<std::uint64_t> KeyValueDocument::get_u64(std::string_view key) const
{
    const auto *e = last(key);
    if (!e)
        return std::nullopt;
    auto v = parse_number<std::uint64_t>(e->value);
    if (!v)
        fail(*e, "expected a non-negative integer, got '" + e->value + "'");
    return v;
}

std::optional<bool> KeyValueDocument::get_bool(std::string_view key) const
{
    const auto *e = last(key);
    if (!e)
        return std::nullopt;
    if (e->value == "true" || e->value == "1" || e->value == "yes")
        return true;
    if (e->value == "false" || e->value == "0" || e->value == "no")
        return false;
    fail(*e, "expected true or false, got '" + e->value + "'");
}

std::optional<std::vector<double>> KeyValueDocument::get_doubles(std::string_view key, std::size_t expected) const
{
    const auto *e = last(key);
    if (!e)
        return std::nullopt;
    std::vector<double> v;
    try
    {
        v = parse_doubles(e->value);
    }
    catch (const domain_error &err)
    {
        fail(*e, err.what());
    }
    if (expected != 0 && v.size() != expected)
        fail(*e, "expected " + std::to_string(expected) + " numbers, got " + std::to_string(v.size()));
    return v;
}

void KeyValueDocument::require_known(std::span<const std::string_view> known) const
{
    for (const auto &e : entries_)
        if (std::find(known.begin(), known.end(), e.key) == known.end())
            fail(e, "unknown key");
}

Scenario ScenarioFile::build() const
{
    if (explicit_users.empty())
        return sample_scenario(seed, config);
    ScenarioConfig cfg = config;
    cfg.num_users = explicit_users.size();
    cfg.validate();
    return make_scenario(cfg, explicit_users);
}

ScenarioFile scenario_file_from(const KeyValueDocument &doc, ScenarioConfig defaults)
{
    ScenarioFile file;
    auto &c = file.config;
    c = std::move(defaults);

    if (auto v = doc.get_size("M"))
        c.num_units = *v;
    if (auto v = doc.get_size("K"))
        c.num_users = *v;
    if (auto v = doc.get_double("L"))
        c.side = *v;
    if (auto v = doc.get_double("lambda"))
        c.wavelength = *v;
    if (auto v = doc.get_double("n0"))
        c.noise_density = *v;
    if (auto v = doc.get_double("power_db"))
        c.power = db_to_linear(*v);
    if (auto v = doc.get_doubles("user_box", 5))
        c.user_box = {(*v)[0], (*v)[1], (*v)[2], (*v)[3], (*v)[4]};
    if (auto h = doc.get("hall"))
    {
        if (*h == "none")
            c.hall.reset();
        else
        {
            auto v = *doc.get_doubles("hall", 6);
            c.hall = Hall{v[0], v[1], v[2], v[3], v[4], v[5]};
        }
    }
    if (auto v = doc.get_u64("seed"))
        file.seed = *v;

    for (const auto &e : doc.all("user"))
    {
        std::vector<double> v;
        try
        {
            v = parse_doubles(e.value);
        }
        catch (const domain_error &err)
        {
            doc.fail(e, err.what());
        }
        if (v.size() != 3 && v.size() != 4)
            doc.fail(e, "expected 'x y z' or 'x y z power_db'");
        file.explicit_users.push_back({{v[0], v[1], v[2]}, v.size() == 4 ? db_to_linear(v[3]) : c.power});
    }
    if (!file.explicit_users.empty() && doc.contains("K") && c.num_users != file.explicit_users.size())
        throw domain_error(doc.source() + ": K = " + std::to_string(c.num_users) + " but " +
                           std::to_string(file.explicit_users.size()) + " user lines given");
    if (!file.explicit_users.empty())
        c.num_users = file.explicit_users.size();
    c.validate();
    return file;
}

} // namespace lis
