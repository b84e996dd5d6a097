#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "mmiq/errors.hpp"

namespace mmiq {

// Round-trip-safe float printing (17 significant digits).
inline std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header) : out_(path) {
        if (!out_) throw Error("cannot open output file '" + path + "'");
        for (std::size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << format_double(values[i]);
        out_ << '\n';
    }

  private:
    std::ofstream out_;
};

}  // namespace mmiq
