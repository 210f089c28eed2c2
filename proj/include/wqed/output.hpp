// output.hpp — CSV and JSON writers for tabular results
//
// Numbers are written with 17 significant digits through std::to_chars, so
// output is locale independent and reparses to identical doubles.

#pragma once

#include "wqed/model.hpp"

#include <string>
#include <utility>
#include <vector>

namespace wqed {

inline constexpr const char* kVersion = "1.0.0";

enum class Format { csv, json };

Format parse_format(const std::string& name);

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add(std::vector<double> row);
};

struct Meta {
    std::string subcommand;
    ModelParams params;
    std::vector<std::pair<std::string, double>> tolerances;
    std::vector<std::pair<std::string, double>> settings;  // grid sizes, N, ...
    std::vector<std::string> warnings;
};

// %.17g; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

std::string to_csv(const Table& table);
// {"meta": {...}, "data": [{column: value, ...}, ...]}; non-finite values become null.
std::string to_json(const Table& table, const Meta& meta);

// Writes to path, or to stdout when path is empty or "-". Throws
// ParameterError if the file cannot be written.
void write_output(const Table& table, const Meta& meta, Format format, const std::string& path);

std::string json_escape(const std::string& s);

}  // namespace wqed
