// Copyright 2026 The ampwit Authors
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

#include "ampwit/io.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "ampwit/errors.h"
#include "json.hpp"

namespace ampwit {

std::string format_double(double x) {
    char buf[32];
    auto result = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, result.ptr);
}

namespace {

[[noreturn]] void fail_at(std::string_view source, size_t line, const std::string &what) {
    std::ostringstream msg;
    msg << source << ":" << line << ": " << what;
    throw ValidationError(msg.str());
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? comma : comma - start)));
        if (comma == std::string_view::npos) {
            return fields;
        }
        start = comma + 1;
    }
}

template <typename T>
bool parse_number(std::string_view text, T &value) {
    if (!text.empty() && text.front() == '+') {
        text.remove_prefix(1);
    }
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    return ec == std::errc() && ptr == text.data() + text.size() && !text.empty();
}

}  // namespace

PulseRecordSet read_pulse_csv(std::istream &in, std::string_view source) {
    PulseRecordSet out;
    std::string raw;
    size_t line_no = 0;
    bool have_header = false;
    bool with_herald = false;
    std::vector<bool> herald;
    while (std::getline(in, raw)) {
        line_no++;
        std::string_view line = trim(raw);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '#') {
            line = trim(line.substr(1));
            size_t eq = line.find('=');
            if (eq != std::string_view::npos) {
                out.meta[std::string(trim(line.substr(0, eq)))] = std::string(trim(line.substr(eq + 1)));
            }
            continue;
        }
        auto fields = split_fields(line);
        if (!have_header) {
            if (fields.size() == 2 && fields[0] == "pulse_index" && fields[1] == "counts") {
                with_herald = false;
            } else if (fields.size() == 3 && fields[0] == "pulse_index" && fields[1] == "counts" &&
                       fields[2] == "herald") {
                with_herald = true;
            } else {
                fail_at(source, line_no, "expected header 'pulse_index,counts[,herald]', got '" + raw + "'");
            }
            have_header = true;
            continue;
        }
        size_t expected = with_herald ? 3 : 2;
        if (fields.size() != expected) {
            fail_at(source, line_no,
                    "expected " + std::to_string(expected) + " fields, got " + std::to_string(fields.size()));
        }
        uint64_t index = 0;
        if (!parse_number(fields[0], index)) {
            fail_at(source, line_no, "pulse_index '" + std::string(fields[0]) + "' is not a non-negative integer");
        }
        double counts = 0;
        if (!parse_number(fields[1], counts) || !std::isfinite(counts)) {
            fail_at(source, line_no, "counts '" + std::string(fields[1]) + "' is not a finite number");
        }
        if (counts < 0) {
            fail_at(source, line_no, "counts must be >= 0, got " + std::string(fields[1]));
        }
        out.counts.push_back(counts);
        if (with_herald) {
            if (fields[2] == "0") {
                herald.push_back(false);
            } else if (fields[2] == "1") {
                herald.push_back(true);
            } else {
                fail_at(source, line_no, "herald must be 0 or 1, got '" + std::string(fields[2]) + "'");
            }
        }
    }
    if (!have_header) {
        fail_at(source, line_no, "missing header 'pulse_index,counts[,herald]'");
    }
    if (out.counts.empty()) {
        fail_at(source, line_no, "no data rows");
    }
    if (with_herald) {
        out.herald = std::move(herald);
    }
    return out;
}

PulseRecordSet load_pulse_csv(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open pulse file '" + path + "'");
    }
    return read_pulse_csv(in, path);
}

void write_pulse_csv(std::ostream &out, const PulseRecordSet &records) {
    for (const auto &[key, value] : records.meta) {
        out << "# " << key << "=" << value << "\n";
    }
    bool with_herald = records.herald.has_value();
    out << (with_herald ? "pulse_index,counts,herald\n" : "pulse_index,counts\n");
    for (size_t i = 0; i < records.counts.size(); i++) {
        out << i << "," << format_double(records.counts[i]);
        if (with_herald) {
            out << "," << ((*records.herald)[i] ? 1 : 0);
        }
        out << "\n";
    }
}

PhotonNumberDistribution parse_distribution_json(const std::string &json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ValidationError(std::string("distribution JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("probs") || !doc["probs"].is_array()) {
        throw ValidationError("distribution JSON must be an object with a 'probs' array");
    }
    std::vector<double> probs;
    for (const auto &v : doc["probs"]) {
        if (!v.is_number()) {
            throw ValidationError("distribution JSON: 'probs' entries must be numbers");
        }
        probs.push_back(v.get<double>());
    }
    return PhotonNumberDistribution(std::move(probs));
}

std::string distribution_to_json(const PhotonNumberDistribution &dist) {
    nlohmann::json doc;
    doc["probs"] = std::vector<double>(dist.probs().begin(), dist.probs().end());
    return doc.dump();
}

void write_intensity_csv(std::ostream &out, const IntensityDistribution &dist) {
    out << "# gain=" << format_double(dist.gain) << "\n";
    out << "N,density\n";
    for (size_t i = 0; i < dist.grid.size(); i++) {
        out << format_double(dist.grid[i]) << "," << format_double(dist.density[i]) << "\n";
    }
}

void write_curve_csv(std::ostream &out, const BoundaryCurve &curve) {
    out << "# kind=" << to_string(curve.kind) << "\n";
    out << "param,x,y\n";
    for (size_t i = 0; i < curve.x.size(); i++) {
        out << format_double(curve.parameter[i]) << "," << format_double(curve.x[i]) << ","
            << format_double(curve.y[i]) << "\n";
    }
}

std::string read_text_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw ValidationError("cannot open '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace ampwit
