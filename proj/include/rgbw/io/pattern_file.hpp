#pragma once

// Text format of a CFA tile:
//
//   # optional comment lines
//   name: kodak          (optional; defaults to "custom")
//   WBWG
//   BWGW
//   ...
//
// Grid lines use the letters R, G, B, W and must all have the same length.
// Blank lines and trailing whitespace are ignored.

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rgbw/cfa.hpp"
#include "rgbw/error.hpp"

namespace rgbw::io {

class PatternParseError : public Error {
public:
    enum class Kind { IllegalCharacter, RaggedGrid, Empty };

    PatternParseError(Kind kind, std::size_t line, std::size_t col, const std::string& what)
        : Error(what), kind_(kind), line_(line), col_(col) {}

    Kind kind() const noexcept { return kind_; }
    /// Zero-based line in the parsed text.
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return col_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t col_;
};

inline char label_char(Channel c) {
    switch (c) {
        case Channel::R: return 'R';
        case Channel::G: return 'G';
        case Channel::B: return 'B';
        case Channel::W: return 'W';
    }
    return '?';
}

inline CfaPattern parse_pattern(std::string_view text, std::string default_name = "custom") {
    using Kind = PatternParseError::Kind;
    std::string name = std::move(default_name);
    std::vector<std::vector<Channel>> tile;
    std::size_t first_grid_line = 0;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.remove_suffix(1);

        if (line.empty() || line.front() == '#') {
            // skip
        } else if (line.rfind("name:", 0) == 0) {
            std::string_view n = line.substr(5);
            while (!n.empty() && (n.front() == ' ' || n.front() == '\t')) n.remove_prefix(1);
            name = std::string(n);
        } else {
            auto& row = tile.emplace_back();
            for (std::size_t col = 0; col < line.size(); ++col) {
                switch (line[col]) {
                    case 'R': row.push_back(Channel::R); break;
                    case 'G': row.push_back(Channel::G); break;
                    case 'B': row.push_back(Channel::B); break;
                    case 'W': row.push_back(Channel::W); break;
                    default:
                        throw PatternParseError(Kind::IllegalCharacter, line_no, col,
                                                "illegal filter label at line " + std::to_string(line_no) +
                                                    ", column " + std::to_string(col));
                }
            }
            if (tile.size() == 1) {
                first_grid_line = line_no;
            } else if (row.size() != tile.front().size()) {
                throw PatternParseError(Kind::RaggedGrid, line_no, row.size(),
                                        "grid line " + std::to_string(line_no) + " has " + std::to_string(row.size()) +
                                            " cells, line " + std::to_string(first_grid_line) + " has " +
                                            std::to_string(tile.front().size()));
            }
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
        ++line_no;
    }
    if (tile.empty()) throw PatternParseError(Kind::Empty, 0, 0, "pattern has no grid lines");
    return CfaPattern(std::move(name), std::move(tile));
}

inline std::string serialize_pattern(const CfaPattern& p) {
    std::string out = "name: " + p.name() + "\n";
    for (const auto& row : p.tile()) {
        for (Channel c : row) out.push_back(label_char(c));
        out.push_back('\n');
    }
    return out;
}

inline CfaPattern load_pattern_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open pattern file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_pattern(ss.str(), path.stem().string());
}

/// Built-in name first, then a file path.
inline CfaPattern resolve_pattern(const std::string& name_or_path) {
    if (auto p = patterns::builtin(name_or_path)) return *p;
    if (std::filesystem::exists(name_or_path)) return load_pattern_file(name_or_path);
    throw IoError("unknown pattern '" + name_or_path + "' (not a built-in name or an existing file)");
}

}  // namespace rgbw::io
