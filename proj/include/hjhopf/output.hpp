#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace hjhopf::cli {

using Json = nlohmann::ordered_json;

/// Deterministic JSON text: two-space indent, floats with 17 significant digits,
/// non-finite numbers as the strings "inf", "-inf" and "nan".
std::string dump_json(const Json& value);

/// Number that survives JSON: finite values as is, infinities as strings.
Json json_number(double v);

/// RFC 4180 table with a mandatory header row; cells are quoted on write where needed.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);
    void add_row(std::vector<std::string> row);
    void write(std::ostream& out) const;
    std::size_t rows() const noexcept { return rows_.size(); }

    static std::string field(double v);
    static std::string field(long long v);
    static std::string field(const std::string& s);

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace hjhopf::cli
