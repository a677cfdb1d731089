#include "exosuit/csv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "exosuit/errors.hpp"

namespace exosuit::csv {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field.push_back(c);
        }
    }
    fields.push_back(field);
    return fields;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out.push_back(',');
        out += fields[i];
    }
    return out;
}

std::vector<std::vector<double>> read_numeric(const std::string& path,
                                              const std::vector<std::string>& header) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw InputError(path + ": missing header row");
    if (split_line(line) != header)
        throw InputError(path + ": expected header '" + join(header) + "', got '" + line + "'");
    std::vector<std::vector<double>> rows;
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        const std::vector<std::string> fields = split_line(line);
        if (fields.size() != header.size())
            throw InputError(path + ": row " + std::to_string(row_no) + " has " +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(header.size()));
        std::vector<double> values;
        values.reserve(fields.size());
        for (std::size_t i = 0; i < fields.size(); ++i) {
            const std::string& f = fields[i];
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (ec != std::errc{} || ptr != f.data() + f.size())
                throw InputError(path + ": row " + std::to_string(row_no) + ", column '" +
                                 header[i] + "': cannot parse '" + f + "' as a number");
            values.push_back(v);
        }
        rows.push_back(std::move(values));
    }
    return rows;
}

void write_table(const std::string& path, const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw InputError("cannot write " + path);
    out << join(header) << '\n';
    for (const std::vector<std::string>& row : rows) out << join(row) << '\n';
    if (!out) throw InputError("write failed for " + path);
}

}  // namespace exosuit::csv
