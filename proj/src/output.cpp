#include "wqed/output.hpp"

#include "wqed/errors.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>

namespace wqed {

Format parse_format(const std::string& name) {
    if (name == "csv") return Format::csv;
    if (name == "json") return Format::json;
    throw ParameterError("unknown output format '" + name + "' (expected csv or json)");
}

void Table::add(std::vector<double> row) {
    if (row.size() != columns.size()) throw ParameterError("row width does not match the header");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v,
                                   std::chars_format::general, 17);
    return std::string(buf.data(), res.ptr);
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_object(const std::vector<std::pair<std::string, double>>& kv) {
    std::string out = "{";
    for (std::size_t i = 0; i < kv.size(); ++i) {
        if (i) out += ", ";
        out += '"' + json_escape(kv[i].first) + "\": " + json_number(kv[i].second);
    }
    return out + "}";
}

}  // namespace

std::string to_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ',';
        out += table.columns[i];
    }
    out += "\r\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_number(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

std::string to_json(const Table& table, const Meta& meta) {
    const ModelParams& p = meta.params;
    std::string out = "{\n  \"meta\": {\n";
    out += "    \"subcommand\": \"" + json_escape(meta.subcommand) + "\",\n";
    out += "    \"version\": \"" + std::string(kVersion) + "\",\n";
    out += "    \"params\": " +
           json_object({{"delta", p.delta},
                        {"epsilon", p.epsilon},
                        {"J", p.j_hop},
                        {"g", p.g},
                        {"gamma_e", p.gamma_e},
                        {"gamma_c", p.gamma_c}}) +
           ",\n";
    out += "    \"tolerances\": " + json_object(meta.tolerances) + ",\n";
    out += "    \"settings\": " + json_object(meta.settings) + ",\n";
    out += "    \"columns\": [";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ", ";
        out += '"' + json_escape(table.columns[i]) + '"';
    }
    out += "],\n    \"warnings\": [";
    for (std::size_t i = 0; i < meta.warnings.size(); ++i) {
        if (i) out += ", ";
        out += '"' + json_escape(meta.warnings[i]) + '"';
    }
    out += "]\n  },\n  \"data\": [";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        out += r ? ",\n    {" : "\n    {";
        for (std::size_t i = 0; i < table.columns.size(); ++i) {
            if (i) out += ", ";
            out += '"' + json_escape(table.columns[i]) + "\": " + json_number(table.rows[r][i]);
        }
        out += '}';
    }
    out += table.rows.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

void write_output(const Table& table, const Meta& meta, Format format, const std::string& path) {
    const std::string text = format == Format::csv ? to_csv(table) : to_json(table, meta);
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ParameterError("cannot open output file '" + path + "'");
    f << text;
    if (!f) throw ParameterError("failed writing output file '" + path + "'");
}

}  // namespace wqed
