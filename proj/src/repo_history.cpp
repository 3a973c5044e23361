#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <set>

#include "sotp/error.hpp"
#include "sotp/process.hpp"
#include "sotp/repo_metrics.hpp"

namespace sotp {

namespace {

constexpr char kRecordSep = '\x1e';
constexpr char kFieldSep = '\x1f';

std::string stderr_excerpt(const std::string& err) {
    std::string trimmed = err.substr(0, 200);
    std::replace(trimmed.begin(), trimmed.end(), '\n', ' ');
    return trimmed;
}

bool parse_numstat_count(std::string_view field, std::int64_t& out) {
    if (field.empty()) return false;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), out);
    return ec == std::errc() && ptr == field.data() + field.size();
}

}  // namespace

GitHistoryMetrics analyze_history(const std::filesystem::path& repo_path, const Date& as_of) {
    std::error_code ec;
    if (!std::filesystem::is_directory(repo_path, ec))
        throw Error(ErrorKind::io,
                    fmt::format("'{}' is not a directory", repo_path.string()));

    CommandResult probe = run_command(
        {"git", "-C", repo_path.string(), "rev-parse", "--git-dir"});
    if (probe.exec_failed)
        throw Error(ErrorKind::io, "the 'git' executable is not available on PATH");
    if (probe.exit_code != 0)
        throw Error(ErrorKind::validation,
                    fmt::format("'{}' is not a version-controlled repository: {}",
                                repo_path.string(), stderr_excerpt(probe.err)));

    // One record per commit: \x1e<committer ISO date>\x1f<author email>,
    // followed by --numstat lines (added<TAB>deleted<TAB>path, '-' = binary).
    CommandResult log = run_command({"git", "-C", repo_path.string(), "log", "--no-renames",
                                     "--numstat",
                                     fmt::format("--pretty=format:{}%cI{}%ae", kRecordSep,
                                                 kFieldSep)});
    if (log.exec_failed)
        throw Error(ErrorKind::io, "the 'git' executable is not available on PATH");
    if (log.exit_code != 0) {
        if (log.err.find("does not have any commits") != std::string::npos ||
            log.err.find("bad default revision") != std::string::npos)
            throw Error(ErrorKind::validation,
                        fmt::format("repository '{}' has no commits", repo_path.string()));
        throw Error(ErrorKind::computation,
                    fmt::format("git log failed: {}", stderr_excerpt(log.err)));
    }
    if (log.out.empty())
        throw Error(ErrorKind::validation,
                    fmt::format("repository '{}' has no commits", repo_path.string()));

    GitHistoryMetrics metrics;
    for (int y = as_of.year - 4; y <= as_of.year; ++y) metrics.commits_by_year[y] = 0;
    for (int back = 11; back >= 0; --back) {
        Date month = add_months(Date{as_of.year, as_of.month, 1}, -back);
        metrics.commits_by_month[fmt::format("{:04d}-{:02d}", month.year, month.month)] = 0;
    }

    std::set<std::string> authors;
    std::optional<Timestamp> first, last;

    std::size_t pos = 0;
    while (pos < log.out.size()) {
        if (log.out[pos] != kRecordSep) {  // leading newline between records
            ++pos;
            continue;
        }
        std::size_t record_end = log.out.find(kRecordSep, pos + 1);
        std::string_view record(log.out.data() + pos + 1,
                                (record_end == std::string::npos ? log.out.size() : record_end) -
                                    pos - 1);
        pos = record_end == std::string::npos ? log.out.size() : record_end;

        std::size_t header_end = record.find('\n');
        std::string_view header = header_end == std::string_view::npos
                                      ? record
                                      : record.substr(0, header_end);
        std::size_t field = header.find(kFieldSep);
        if (field == std::string_view::npos)
            throw Error(ErrorKind::computation, "unexpected git log record format");
        std::string_view date_text = header.substr(0, field);
        std::string author{header.substr(field + 1)};
        std::transform(author.begin(), author.end(), author.begin(),
                       [](unsigned char c) { return std::tolower(c); });

        Timestamp committed = Timestamp::parse_iso8601(date_text);
        Date utc = committed.utc_date();

        ++metrics.total_commits;
        authors.insert(author);
        if (!first || committed < *first) first = committed;
        if (!last || committed > *last) last = committed;

        if (auto it = metrics.commits_by_year.find(utc.year); it != metrics.commits_by_year.end())
            ++it->second;
        std::string month_key = fmt::format("{:04d}-{:02d}", utc.year, utc.month);
        if (auto it = metrics.commits_by_month.find(month_key);
            it != metrics.commits_by_month.end())
            ++it->second;

        if (header_end == std::string_view::npos) continue;
        std::string_view body = record.substr(header_end + 1);
        std::size_t line_start = 0;
        while (line_start < body.size()) {
            std::size_t line_end = body.find('\n', line_start);
            std::string_view line = line_end == std::string_view::npos
                                        ? body.substr(line_start)
                                        : body.substr(line_start, line_end - line_start);
            line_start = line_end == std::string_view::npos ? body.size() : line_end + 1;
            if (line.empty()) continue;
            std::size_t tab1 = line.find('\t');
            if (tab1 == std::string_view::npos) continue;
            std::size_t tab2 = line.find('\t', tab1 + 1);
            if (tab2 == std::string_view::npos) continue;
            std::int64_t added = 0, deleted = 0;
            // '-' marks a binary delta; those are excluded from the sums.
            if (parse_numstat_count(line.substr(0, tab1), added) &&
                parse_numstat_count(line.substr(tab1 + 1, tab2 - tab1 - 1), deleted)) {
                metrics.lines_added += added;
                metrics.lines_deleted += deleted;
            }
        }
    }

    if (metrics.total_commits == 0)
        throw Error(ErrorKind::validation,
                    fmt::format("repository '{}' has no commits", repo_path.string()));

    metrics.developer_count = static_cast<std::int64_t>(authors.size());
    metrics.first_commit_date = first->utc_date();
    metrics.last_commit_date = last->utc_date();
    return metrics;
}

}  // namespace sotp
