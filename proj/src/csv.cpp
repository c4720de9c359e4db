#include "sketchls/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

#include "sketchls/error.hpp"

namespace sketchls::csv {

namespace {

struct Field {
    std::string text;
    std::size_t column;
};

[[noreturn]] void fail(const std::string& source, std::size_t line, std::size_t column, const std::string& msg) {
    throw Error(ErrorKind::ParseError,
                source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
}

/// Splits RFC-4180 text into records. Line numbers refer to the line where
/// each record starts.
std::vector<std::pair<std::size_t, std::vector<Field>>> split_records(const std::string& text,
                                                                     const std::string& source) {
    std::vector<std::pair<std::size_t, std::vector<Field>>> records;
    std::vector<Field> current;
    std::string field;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool quoted = false;
    bool was_quoted = false;
    bool any = false;

    auto end_field = [&] {
        current.push_back({field, current.size() + 1});
        field.clear();
        was_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = current.size() == 1 && current[0].text.empty() && !any;
        if (!blank) records.emplace_back(record_line, std::move(current));
        current.clear();
        any = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (!field.empty() || was_quoted) fail(source, line, current.size() + 1, "stray quote");
                quoted = was_quoted = any = true;
                break;
            case ',':
                any = true;
                end_field();
                break;
            case '\r':
                if (i + 1 < text.size() && text[i + 1] == '\n') break;
                fail(source, line, current.size() + 1, "bare carriage return");
            case '\n':
                end_record();
                ++line;
                record_line = line;
                break;
            default:
                if (was_quoted) fail(source, line, current.size() + 1, "text after closing quote");
                any = true;
                field.push_back(c);
        }
    }
    if (quoted) fail(source, line, current.size() + 1, "unterminated quoted field");
    if (any || !field.empty() || !current.empty()) end_record();
    return records;
}

double parse_number(const std::string& raw, const std::string& source, std::size_t line, std::size_t column) {
    std::size_t b = 0;
    std::size_t e = raw.size();
    while (b < e && (raw[b] == ' ' || raw[b] == '\t')) ++b;
    while (e > b && (raw[e - 1] == ' ' || raw[e - 1] == '\t')) --e;
    if (b == e) fail(source, line, column, "empty field");
    const char* first = raw.data() + b;
    const char* last = raw.data() + e;
    if (*first == '+') ++first;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
        fail(source, line, column, "not a number: '" + raw.substr(b, e - b) + "'");
    if (!std::isfinite(v)) fail(source, line, column, "non-finite value");
    return v;
}

}  // namespace

Table parse(const std::string& text, const std::string& source) {
    const auto records = split_records(text, source);
    if (records.empty()) fail(source, 1, 1, "missing header row");
    Table t;
    for (const Field& f : records[0].second) t.header.push_back(f.text);
    const std::size_t cols = t.header.size();
    const std::size_t rows = records.size() - 1;
    std::vector<double> values;
    values.reserve(rows * cols);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& [line, fields] = records[r];
        if (fields.size() != cols)
            fail(source, line, std::min(fields.size(), cols) + 1,
                 "expected " + std::to_string(cols) + " fields, found " + std::to_string(fields.size()));
        for (const Field& f : fields) values.push_back(parse_number(f.text, source, line, f.column));
    }
    t.values = Matrix(rows, cols, std::move(values));
    return t;
}

Table read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::IoError, "cannot open '" + path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str(), path.string());
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out.push_back('"');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorKind::IoError, "cannot write '" + tmp.string() + "'");
        out << contents;
        out.flush();
        if (!out) throw Error(ErrorKind::IoError, "short write to '" + tmp.string() + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorKind::IoError, "cannot rename into '" + path.string() + "'");
    }
}

std::string render(const std::vector<std::string>& header, const Matrix& values) {
    if (header.size() != values.cols())
        throw Error(ErrorKind::DimensionMismatch, "header has " + std::to_string(header.size()) +
                                                      " names for " + std::to_string(values.cols()) + " columns");
    std::string out;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j) out.push_back(',');
        out += escape(header[j]);
    }
    out.push_back('\n');
    for (std::size_t i = 0; i < values.rows(); ++i) {
        for (std::size_t j = 0; j < values.cols(); ++j) {
            if (j) out.push_back(',');
            out += format_double(values(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

}  // namespace sketchls::csv
