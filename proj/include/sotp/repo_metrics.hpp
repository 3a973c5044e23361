#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sotp/dates.hpp"

namespace sotp {

struct LineCounts {
    std::int64_t total = 0;
    std::int64_t code = 0;
    std::int64_t comment = 0;
    std::int64_t blank = 0;

    LineCounts& operator+=(const LineCounts& other);
    bool operator==(const LineCounts&) const = default;
};

/// Comment syntax for one language. Block delimiters are tracked with a
/// two-state machine; nesting is not supported. String literals are not
/// lexed, so comment tokens inside strings are misclassified.
struct LanguageSyntax {
    std::string name;
    std::vector<std::string> line_comments;
    std::vector<std::pair<std::string, std::string>> block_comments;
};

/// Lookup by classification token ("c++", "python", ...); unknown tokens
/// fall back to "plain" where every non-blank line is code.
const LanguageSyntax& language_syntax(std::string_view language);

/// Maps a file path to a classification token via its extension.
std::string language_for_path(const std::filesystem::path& path);

/// Classifies content into blank / comment / code lines. A line is blank
/// when it is only whitespace, comment when all its non-blank content sits
/// inside comments, and code otherwise (mixed lines count as code).
LineCounts count_lines(std::string_view content, std::string_view language);

/// True when a NUL byte occurs in the first 8000 bytes.
bool detect_binary(std::string_view content);

struct CodeMetrics {
    std::int64_t text_files = 0;
    std::int64_t binary_files = 0;
    std::map<std::string, LineCounts> per_language;
    LineCounts totals;

    bool operator==(const CodeMetrics&) const = default;
};

struct FileEntry {
    std::string path;  // repo-relative, for reporting
    bool binary = false;
    std::string language;
    LineCounts counts;
};

/// Folds per-file entries; order never affects the result.
CodeMetrics aggregate_files(std::span<const FileEntry> files);

/// Walks a working tree (skipping the version-control metadata directory
/// and any path whose component matches an ignore entry), classifies each
/// regular file and sums line counts.
CodeMetrics aggregate_tree(const std::filesystem::path& repo_path,
                           const std::vector<std::string>& ignore = {});

struct GitHistoryMetrics {
    std::int64_t total_commits = 0;
    std::map<int, std::int64_t> commits_by_year;            // 5 calendar years up to as_of
    std::map<std::string, std::int64_t> commits_by_month;   // "YYYY-MM", 12 months up to as_of
    std::int64_t lines_added = 0;    // text files only
    std::int64_t lines_deleted = 0;  // text files only
    Date first_commit_date;
    Date last_commit_date;
    std::int64_t developer_count = 0;  // distinct author emails, lowercased

    bool operator==(const GitHistoryMetrics&) const = default;
};

/// Mines commit history of a local clone via `git log`. Buckets use the
/// committer date converted to UTC.
GitHistoryMetrics analyze_history(const std::filesystem::path& repo_path, const Date& as_of);

}  // namespace sotp
