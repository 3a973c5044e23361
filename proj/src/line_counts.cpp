#include <algorithm>
#include <array>
#include <cctype>

#include "sotp/repo_metrics.hpp"

namespace sotp {

LineCounts& LineCounts::operator+=(const LineCounts& other) {
    total += other.total;
    code += other.code;
    comment += other.comment;
    blank += other.blank;
    return *this;
}

namespace {

LanguageSyntax make(std::string name, std::vector<std::string> line,
                    std::vector<std::pair<std::string, std::string>> block = {}) {
    return LanguageSyntax{std::move(name), std::move(line), std::move(block)};
}

const std::vector<LanguageSyntax>& syntax_table() {
    static const std::vector<LanguageSyntax> table = {
        make("c", {"//"}, {{"/*", "*/"}}),
        make("c++", {"//"}, {{"/*", "*/"}}),
        make("java", {"//"}, {{"/*", "*/"}}),
        make("python", {"#"}),
        make("cython", {"#"}),
        make("fortran", {"!"}),
        make("matlab", {"%"}, {{"%{", "%}"}}),
        make("r", {"#"}),
        make("ruby", {"#"}, {{"=begin", "=end"}}),
        make("shell", {"#"}),
        make("pascal", {"//"}, {{"{", "}"}, {"(*", "*)"}}),
        make("basic", {"'"}),
        make("idl", {";"}),
        make("plain", {}),
    };
    return table;
}

const std::map<std::string, std::string, std::less<>>& extension_map() {
    static const std::map<std::string, std::string, std::less<>> map = {
        {".c", "c"},        {".h", "c"},
        {".cpp", "c++"},    {".cc", "c++"},    {".cxx", "c++"},   {".hpp", "c++"},
        {".hh", "c++"},     {".hxx", "c++"},
        {".java", "java"},
        {".py", "python"},  {".pyx", "cython"},
        {".f", "fortran"},  {".f77", "fortran"}, {".f90", "fortran"}, {".f95", "fortran"},
        {".f03", "fortran"}, {".for", "fortran"},
        {".m", "matlab"},
        {".r", "r"},
        {".rb", "ruby"},
        {".sh", "shell"},   {".bash", "shell"},
        {".pas", "pascal"},
        {".bas", "basic"},
        {".pro", "idl"},
    };
    return map;
}

bool only_whitespace(std::string_view line) {
    return std::all_of(line.begin(), line.end(),
                       [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
}

}  // namespace

const LanguageSyntax& language_syntax(std::string_view language) {
    for (const LanguageSyntax& s : syntax_table())
        if (s.name == language) return s;
    return syntax_table().back();  // plain
}

std::string language_for_path(const std::filesystem::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    auto it = extension_map().find(ext);
    return it == extension_map().end() ? "plain" : it->second;
}

LineCounts count_lines(std::string_view content, std::string_view language) {
    const LanguageSyntax& syntax = language_syntax(language);
    LineCounts counts;
    bool in_block = false;            // state carried across lines
    std::size_t open_index = 0;       // which block pair is open

    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t eol = content.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? content.substr(pos)
                                                              : content.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? content.size() : eol + 1;
        if (line.ends_with('\r')) line.remove_suffix(1);

        ++counts.total;
        if (only_whitespace(line)) {
            ++counts.blank;
            continue;
        }

        bool has_code = false;
        std::size_t i = 0;
        while (i < line.size()) {
            if (in_block) {
                const std::string& close = syntax.block_comments[open_index].second;
                std::size_t end = line.find(close, i);
                if (end == std::string_view::npos) {
                    i = line.size();
                } else {
                    i = end + close.size();
                    in_block = false;
                }
                continue;
            }
            char c = line[i];
            if (std::isspace(static_cast<unsigned char>(c))) {
                ++i;
                continue;
            }
            bool matched = false;
            // Block openers win over line tokens ("%{" vs Matlab's "%").
            for (std::size_t b = 0; b < syntax.block_comments.size(); ++b) {
                const std::string& open = syntax.block_comments[b].first;
                if (line.compare(i, open.size(), open) == 0) {
                    in_block = true;
                    open_index = b;
                    i += open.size();
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            for (const std::string& tok : syntax.line_comments) {
                if (line.compare(i, tok.size(), tok) == 0) {
                    i = line.size();  // rest of line is comment
                    matched = true;
                    break;
                }
            }
            if (matched) continue;
            has_code = true;
            ++i;
        }

        // Any non-whitespace outside comments makes the line code; a line
        // whose content is all comment text counts as comment.
        if (has_code)
            ++counts.code;
        else
            ++counts.comment;
    }
    return counts;
}

bool detect_binary(std::string_view content) {
    std::size_t limit = std::min<std::size_t>(content.size(), 8000);
    return content.substr(0, limit).find('\0') != std::string_view::npos;
}

}  // namespace sotp
