#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "revtor/errors.hpp"

namespace revtor {

/// CSV with a header row, UNIX newlines, and numbers in full-precision
/// scientific notation; byte-stable across runs.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path, std::ios::binary) {
        if (!out_)
            throw ValidationError("CsvWriter: cannot open " + path);
        for (std::size_t i = 0; i < header.size(); ++i) {
            if (i) out_ << ',';
            out_ << header[i];
        }
        out_ << '\n';
    }

    void beginRow() { first_ = true; }

    void cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17e", v);
        sep();
        out_ << buf;
    }

    void cell(const std::string& v) {
        sep();
        out_ << v;
    }

    void cell(long v) {
        sep();
        out_ << v;
    }

    void endRow() { out_ << '\n'; }

    void row(const std::vector<double>& vals) {
        beginRow();
        for (double v : vals)
            cell(v);
        endRow();
    }

private:
    void sep() {
        if (!first_) out_ << ',';
        first_ = false;
    }
    std::ofstream out_;
    bool first_ = true;
};

} // namespace revtor
