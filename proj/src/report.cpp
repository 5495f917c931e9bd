#include "zlab/report.hpp"

#include <openssl/evp.h>

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace zlab {

namespace fs = std::filesystem;

void Table::add_row(std::vector<double> row)
{
    if (row.size() != columns.size())
        throw std::invalid_argument("table " + name + ": row has " + std::to_string(row.size()) +
                                    " values for " + std::to_string(columns.size()) + " columns");
    rows.push_back(std::move(row));
}

std::string format_number(double x)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
    if (ec != std::errc())
        throw std::runtime_error("cannot format number");
    return std::string(buf, end);
}

double parse_number(std::string_view text)
{
    if (text == "nan")
        return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf")
        return std::numeric_limits<double>::infinity();
    if (text == "-inf")
        return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), x);
    if (ec != std::errc() || end != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return x;
}

std::string git_blob_hash(std::string_view content)
{
    std::string header = "blob " + std::to_string(content.size());
    header.push_back('\0');
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    bool ok = ctx && EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) &&
              EVP_DigestUpdate(ctx, header.data(), header.size()) &&
              EVP_DigestUpdate(ctx, content.data(), content.size()) && EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);
    if (!ok)
        throw std::runtime_error("SHA-1 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < length; ++i) {
        unsigned char b = digest[i];
        out.push_back(hex[b >> 4]);
        out.push_back(hex[b & 15]);
    }
    return out;
}

std::string render_summary(const ReportDocument& doc, bool timing)
{
    // ordered_json keeps the section order stable and readable.
    nlohmann::ordered_json j;
    j["config"] = doc.config;
    j["input_hash"] = git_blob_hash(doc.config.dump());
    if (!doc.summary.empty())
        j["summary"] = doc.summary;
    if (!doc.tables.empty() || !doc.plots.empty()) {
        auto files = nlohmann::ordered_json::array();
        for (const auto& t : doc.tables)
            files.push_back(t.name + ".csv");
        for (const auto& p : doc.plots)
            files.push_back("plotdata_" + p.name + ".csv");
        j["files"] = files;
    }
    if (timing && doc.wall_seconds)
        j["timing"] = {{"wall_seconds", *doc.wall_seconds}};
    return j.dump(2) + "\n";
}

std::string render_csv(const Table& table)
{
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c)
            out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

namespace {

std::vector<std::string_view> split(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        cells.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos)
            return cells;
        start = comma + 1;
    }
}

void write_atomic(const fs::path& path, const std::string& content)
{
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error(tmp.string() + ": cannot open for writing: " + std::strerror(errno));
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out)
            throw std::runtime_error(tmp.string() + ": write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp);
        throw std::runtime_error(path.string() + ": cannot replace: " + ec.message());
    }
}

} // namespace

Table parse_csv(std::string_view text, std::string name)
{
    Table t;
    t.name = std::move(name);
    std::size_t pos = 0;
    bool header = true;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        if (line.empty())
            continue;
        auto cells = split(line);
        if (header) {
            for (auto c : cells)
                t.columns.emplace_back(c);
            header = false;
            continue;
        }
        std::vector<double> row;
        for (auto c : cells)
            row.push_back(parse_number(c));
        t.add_row(std::move(row));
    }
    return t;
}

void emit_reports(const ReportDocument& doc, const fs::path& dir, bool timing)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw std::runtime_error(dir.string() + ": cannot create directory: " + ec.message());
    for (const auto& t : doc.tables)
        write_atomic(dir / (t.name + ".csv"), render_csv(t));
    for (const auto& p : doc.plots)
        write_atomic(dir / ("plotdata_" + p.name + ".csv"), render_csv(p));
    // Written last: a complete summary.json marks a complete report.
    write_atomic(dir / "summary.json", render_summary(doc, timing));
}

std::string read_text_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error(path.string() + ": cannot open for reading");
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace zlab
