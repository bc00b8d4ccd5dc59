#include "hjhopf/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "hjhopf/error.hpp"

namespace hjhopf::cli {
namespace {

std::string format_double(double v) {
    if (std::isnan(v)) return "\"nan\"";
    if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    std::string s = buf;
    if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
    return s;
}

void emit(const Json& v, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
    case Json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + Json(it.key()).dump() + ": ";
            emit(it.value(), out, depth + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        const bool flat = std::all_of(v.begin(), v.end(), [](const Json& e) { return e.is_primitive(); });
        if (flat) {
            out += "[";
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (i) out += ", ";
                emit(v[i], out, depth + 1);
            }
            out += "]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            emit(v[i], out, depth + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float:
        out += format_double(v.get<double>());
        return;
    default:
        out += v.dump();
    }
}

}  // namespace

std::string dump_json(const Json& value) {
    std::string out;
    emit(value, out, 0);
    out += "\n";
    return out;
}

Json json_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {
    if (header_.empty()) throw Error("csv table needs a header");
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw Error("csv row width differs from header");
    rows_.push_back(std::move(row));
}

std::string CsvTable::field(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::field(long long v) { return std::to_string(v); }

std::string CsvTable::field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
        if (c == '"') q += '"';
        q += c;
    }
    return q + "\"";
}

void CsvTable::write(std::ostream& out) const {
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out << ',';
            out << field(cells[i]);
        }
        out << "\r\n";
    };
    line(header_);
    for (const auto& r : rows_) line(r);
}

}  // namespace hjhopf::cli
