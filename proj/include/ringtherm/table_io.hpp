// Copyright 2026 The ringtherm Authors
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

// CSV and JSON encodings of ScanTable.
//
// CSV: '#'-prefixed metadata lines ("# key: value", "# summary.key: value"),
// one header row of column names ending in "status", then data rows. Numbers
// use scientific notation with 17 significant digits; NaN is written "nan".
//
// JSON: {"meta": {..., "summary": {...}}, "columns": {name: [...]},
// "status": [...]} with NaN as null. Column order is preserved.

#pragma once

#include <charconv>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "ringtherm/error.hpp"
#include "ringtherm/experiments.hpp"

namespace ringtherm {

inline std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::scientific, 16);
    return std::string(buf, res.ptr);
}

inline double parse_number(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
    }
    return v;
}

namespace detail {

inline std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

inline constexpr std::string_view kSummaryPrefix = "summary.";

} // namespace detail

inline std::string to_csv(const ScanTable& t) {
    std::ostringstream os;
    os << "# kind: " << t.kind << '\n';
    for (const auto& [k, v] : t.meta) os << "# " << k << ": " << v << '\n';
    for (const auto& [k, v] : t.summary) os << "# " << detail::kSummaryPrefix << k << ": " << format_number(v) << '\n';
    for (const auto& c : t.columns) os << c << ',';
    os << "status\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        for (double v : t.rows[i]) os << format_number(v) << ',';
        os << t.status[i] << '\n';
    }
    return os.str();
}

inline ScanTable from_csv(const std::string& text) {
    ScanTable t;
    std::istringstream is(text);
    std::string line;
    bool have_header = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (!have_header && line.front() == '#') {
            const std::string_view body = std::string_view(line).substr(line.size() > 1 && line[1] == ' ' ? 2 : 1);
            const std::size_t sep = body.find(": ");
            if (sep == std::string_view::npos) {
                throw Error(ErrorKind::InvalidArgument, "malformed metadata line: " + line);
            }
            const std::string key(body.substr(0, sep));
            const std::string value(body.substr(sep + 2));
            if (key == "kind") {
                t.kind = value;
            } else if (key.starts_with(detail::kSummaryPrefix)) {
                t.summary.emplace_back(key.substr(detail::kSummaryPrefix.size()), parse_number(value));
            } else {
                t.meta.emplace_back(key, value);
            }
            continue;
        }
        const auto fields = detail::split_commas(line);
        if (!have_header) {
            if (fields.empty() || fields.back() != "status") {
                throw Error(ErrorKind::InvalidArgument, "CSV header must end with a status column");
            }
            for (std::size_t i = 0; i + 1 < fields.size(); ++i) t.columns.emplace_back(fields[i]);
            have_header = true;
            continue;
        }
        if (fields.size() != t.columns.size() + 1) {
            throw Error(ErrorKind::InvalidArgument, "CSV row has the wrong number of fields: " + line);
        }
        std::vector<double> row;
        row.reserve(t.columns.size());
        for (std::size_t i = 0; i < t.columns.size(); ++i) row.push_back(parse_number(fields[i]));
        t.add_row(std::move(row), std::string(fields.back()));
    }
    if (!have_header) {
        throw Error(ErrorKind::InvalidArgument, "CSV has no header row");
    }
    return t;
}

inline std::string to_json(const ScanTable& t) {
    using json = nlohmann::ordered_json;
    auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json meta = json::object();
    meta["kind"] = t.kind;
    for (const auto& [k, v] : t.meta) meta[k] = v;
    json summary = json::object();
    for (const auto& [k, v] : t.summary) summary[k] = num(v);
    meta["summary"] = summary;

    json columns = json::object();
    for (std::size_t c = 0; c < t.columns.size(); ++c) {
        json col = json::array();
        for (const auto& row : t.rows) col.push_back(num(row[c]));
        columns[t.columns[c]] = std::move(col);
    }
    json doc = json::object();
    doc["meta"] = std::move(meta);
    doc["columns"] = std::move(columns);
    doc["status"] = t.status;
    return doc.dump(2) + "\n";
}

inline ScanTable from_json(const std::string& text) {
    using json = nlohmann::ordered_json;
    const json doc = json::parse(text);
    auto num = [](const json& v) { return v.is_null() ? std::numeric_limits<double>::quiet_NaN() : v.get<double>(); };
    ScanTable t;
    for (const auto& [k, v] : doc.at("meta").items()) {
        if (k == "kind") {
            t.kind = v.get<std::string>();
        } else if (k == "summary") {
            for (const auto& [sk, sv] : v.items()) t.summary.emplace_back(sk, num(sv));
        } else {
            t.meta.emplace_back(k, v.get<std::string>());
        }
    }
    const auto& status = doc.at("status");
    std::vector<std::vector<double>> rows(status.size());
    for (const auto& [name, col] : doc.at("columns").items()) {
        t.columns.push_back(name);
        if (col.size() != status.size()) {
            throw Error(ErrorKind::InvalidArgument, "column '" + name + "' has the wrong length");
        }
        for (std::size_t i = 0; i < col.size(); ++i) rows[i].push_back(num(col[i]));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) t.add_row(std::move(rows[i]), status[i].get<std::string>());
    return t;
}

} // namespace ringtherm
