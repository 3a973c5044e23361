#include <fmt/format.h>

#include <algorithm>
#include <fstream>

#include "sotp/error.hpp"
#include "sotp/repo_metrics.hpp"

namespace sotp {

namespace fs = std::filesystem;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, fmt::format("cannot read '{}'", path.string()));
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorKind::io, fmt::format("failed reading '{}'", path.string()));
    return content;
}

bool ignored(const fs::path& relative, const std::vector<std::string>& ignore) {
    for (const auto& component : relative) {
        if (component == ".git") return true;
        for (const std::string& entry : ignore)
            if (component == entry) return true;
    }
    return false;
}

}  // namespace

CodeMetrics aggregate_files(std::span<const FileEntry> files) {
    CodeMetrics metrics;
    for (const FileEntry& f : files) {
        if (f.binary) {
            ++metrics.binary_files;
            continue;
        }
        ++metrics.text_files;
        metrics.per_language[f.language] += f.counts;
        metrics.totals += f.counts;
    }
    return metrics;
}

CodeMetrics aggregate_tree(const fs::path& repo_path, const std::vector<std::string>& ignore) {
    std::error_code ec;
    std::vector<fs::path> paths;
    fs::recursive_directory_iterator it(repo_path, fs::directory_options::none, ec);
    if (ec) throw Error(ErrorKind::io, fmt::format("cannot walk '{}': {}", repo_path.string(),
                                                   ec.message()));
    for (auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
        if (ec)
            throw Error(ErrorKind::io,
                        fmt::format("walk failed under '{}': {}", repo_path.string(), ec.message()));
        const fs::path& path = it->path();
        fs::path relative = path.lexically_relative(repo_path);
        if (it->is_directory() && ignored(relative, ignore)) {
            it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file() || it->is_symlink()) continue;
        if (ignored(relative, ignore)) continue;
        paths.push_back(path);
    }
    std::sort(paths.begin(), paths.end());

    std::vector<FileEntry> entries;
    entries.reserve(paths.size());
    for (const fs::path& path : paths) {
        FileEntry entry;
        entry.path = path.lexically_relative(repo_path).generic_string();
        std::string content = read_file(path);
        entry.binary = detect_binary(content);
        if (!entry.binary) {
            entry.language = language_for_path(path);
            entry.counts = count_lines(content, entry.language);
        }
        entries.push_back(std::move(entry));
    }
    return aggregate_files(entries);
}

}  // namespace sotp
