#pragma once

// Deterministic CSV serialization. Doubles are printed with %.17g so a
// value round-trips bit-exactly and two runs with equal seeds produce
// byte-identical files.

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "orwalk/errors.hpp"

namespace orwalk {

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        return -1;
    }

    std::vector<double> column_values(const std::string& name) const {
        const int c = column(name);
        if (c < 0) throw ConfigError("csv: missing column '" + name + "'");
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[static_cast<std::size_t>(c)]);
        return out;
    }

    std::string to_string() const {
        std::string s;
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) s += ',';
            s += header[i];
        }
        s += '\n';
        for (const auto& r : rows) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) s += ',';
                s += format_double(r[i]);
            }
            s += '\n';
        }
        return s;
    }
};

inline CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open csv: " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        if (first) {
            while (std::getline(ss, cell, ',')) t.header.push_back(cell);
            first = false;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(std::stod(cell));
            } catch (const std::exception&) {
                throw ConfigError("csv: non-numeric cell '" + cell + "' in " + path);
            }
        }
        if (row.size() != t.header.size())
            throw ConfigError("csv: ragged row in " + path);
        t.rows.push_back(std::move(row));
    }
    return t;
}

}  // namespace orwalk
