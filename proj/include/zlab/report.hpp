#pragma once

#include "json.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace zlab {

// Numeric table written as <name>.csv: header row, one line per row.
struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    // Throws if the row width differs from the column count.
    void add_row(std::vector<double> row);
};

struct ReportDocument {
    nlohmann::json config = nlohmann::json::object(); // echo of the RunConfig
    nlohmann::json summary = nlohmann::json::object();
    std::vector<Table> tables;
    std::vector<Table> plots; // written as plotdata_<name>.csv
    std::optional<double> wall_seconds;
};

// Shortest decimal that parses back to the same double; "nan", "inf", "-inf".
std::string format_number(double x);
double parse_number(std::string_view text);

// git blob object id: SHA-1 of "blob <size>\0" followed by the content.
std::string git_blob_hash(std::string_view content);

// summary.json text: config, input_hash (blob hash of the compact config),
// then summary, tables and timing when present.
std::string render_summary(const ReportDocument& doc, bool timing);
std::string render_csv(const Table& table);
Table parse_csv(std::string_view text, std::string name = {});

// Writes summary.json, <table>.csv and plotdata_<plot>.csv into dir,
// each through a temporary file and a rename. Errors name the path.
void emit_reports(const ReportDocument& doc, const std::filesystem::path& dir, bool timing = true);

std::string read_text_file(const std::filesystem::path& path);

} // namespace zlab
