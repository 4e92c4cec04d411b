#pragma once
// Line-oriented TSV reading with 1-based line numbers in every error.
// Lines starting with '#' and fully blank lines are skipped.

#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "laser/common.hpp"

namespace laser {

class TsvReader {
public:
    explicit TsvReader(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw DataError("cannot open file: " + path);
    }

    // Returns false at EOF; otherwise fills `fields` with the next data row.
    bool next(std::vector<std::string>& fields) {
        std::string line;
        while (std::getline(in_, line)) {
            ++line_number_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            fields = split(line, '\t');
            return true;
        }
        return false;
    }

    size_t line_number() const { return line_number_; }
    const std::string& path() const { return path_; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw DataError(path_ + ":" + std::to_string(line_number_) + ": " + msg);
    }

    void expect_fields(const std::vector<std::string>& fields, size_t n) const {
        if (fields.size() != n)
            fail("expected " + std::to_string(n) + " tab-separated fields, got " +
                 std::to_string(fields.size()));
    }

private:
    std::string path_;
    std::ifstream in_;
    size_t line_number_ = 0;
};

inline std::ofstream open_output(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path);
    return out;
}

}  // namespace laser
