#pragma once

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace cyclap {

inline std::vector<std::string> tokenize(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

/// Line-oriented reader for the text formats. `#` starts a comment. Directive
/// reads skip blank lines; raw reads return the next line verbatim, since
/// matrix rows over a zero-dimensional domain are legitimately empty.
class LineReader {
  public:
    explicit LineReader(std::string_view text) {
        std::size_t lineno = 1;
        std::size_t start = 0;
        for (std::size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == '\n') {
                std::string_view line = text.substr(start, i - start);
                auto hash = line.find('#');
                if (hash != std::string_view::npos) line = line.substr(0, hash);
                lines_.emplace_back(lineno, std::string(line));
                start = i + 1;
                ++lineno;
            }
        }
    }

    /// Next line with any tokens on it; nullopt at end of input.
    std::optional<std::pair<std::size_t, std::vector<std::string>>> next_directive() {
        while (pos_ < lines_.size()) {
            auto toks = tokenize(lines_[pos_].second);
            std::size_t lineno = lines_[pos_].first;
            ++pos_;
            if (!toks.empty()) return std::make_pair(lineno, std::move(toks));
        }
        return std::nullopt;
    }

    /// Next line whether or not it is blank.
    std::pair<std::size_t, std::vector<std::string>> next_raw() {
        if (pos_ >= lines_.size()) throw ParseError(last_line(), "unexpected end of input");
        auto toks = tokenize(lines_[pos_].second);
        std::size_t lineno = lines_[pos_].first;
        ++pos_;
        return {lineno, std::move(toks)};
    }

    std::size_t last_line() const { return lines_.empty() ? 1 : lines_.back().first; }

  private:
    std::vector<std::pair<std::size_t, std::string>> lines_;
    std::size_t pos_ = 0;
};

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path);
    out << content;
}

inline std::optional<std::uint64_t> parse_uint(std::string_view s) {
    if (s.empty() || s.size() > 19) return std::nullopt;  // 19 digits always fit in 64 bits
    std::uint64_t v = 0;
    for (char c : s) {
        if (c < '0' || c > '9') return std::nullopt;
        v = v * 10 + static_cast<std::uint64_t>(c - '0');
    }
    return v;
}

}  // namespace cyclap
