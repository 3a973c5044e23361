#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>

#include "sotp/repo_metrics.hpp"

using namespace sotp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               fs::path("sotp-tree-" + std::to_string(std::random_device{}()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write(const fs::path& p, std::string_view content) {
    fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace

TEST_CASE("tree with one text and one binary file") {
    TempDir dir;
    write(dir.path / "main.c", "int main() { return 0; }\nint x;\n// eof\n"
                               "int y;\nint z;\nint w;\nint v;\nint u;\nint t;\nint s;\n");
    std::string binary = "BIN";
    binary += '\0';
    binary += "DATA";
    write(dir.path / "blob.bin", binary);

    CodeMetrics metrics = aggregate_tree(dir.path);
    CHECK(metrics.text_files == 1);
    CHECK(metrics.binary_files == 1);
    CHECK(metrics.totals.total == 10);
    CHECK(metrics.totals.code == 9);
    CHECK(metrics.totals.comment == 1);
    CHECK(metrics.per_language.size() == 1);
    CHECK(metrics.per_language.at("c") == metrics.totals);
}

TEST_CASE("empty tree yields all zeros") {
    TempDir dir;
    CodeMetrics metrics = aggregate_tree(dir.path);
    CHECK(metrics == CodeMetrics{});
}

TEST_CASE("same-language files sum into one entry") {
    TempDir dir;
    write(dir.path / "a.py", "x = 1\n# a\n");
    write(dir.path / "sub/b.py", "y = 2\n\n");
    CodeMetrics metrics = aggregate_tree(dir.path);
    CHECK(metrics.text_files == 2);
    CHECK(metrics.per_language.size() == 1);
    LineCounts python = metrics.per_language.at("python");
    CHECK(python.total == 4);
    CHECK(python.code == 2);
    CHECK(python.comment == 1);
    CHECK(python.blank == 1);
    CHECK(metrics.totals == python);
}

TEST_CASE("version-control metadata and ignore entries are skipped") {
    TempDir dir;
    write(dir.path / "keep.py", "x = 1\n");
    write(dir.path / ".git" / "objects" / "junk.py", "ignored = True\n");
    write(dir.path / "vendor" / "dep.py", "ignored = True\n");
    CodeMetrics without_ignore = aggregate_tree(dir.path);
    CHECK(without_ignore.text_files == 2);  // vendor included by default
    CodeMetrics with_ignore = aggregate_tree(dir.path, {"vendor"});
    CHECK(with_ignore.text_files == 1);
    CHECK(with_ignore.totals.total == 1);
}

TEST_CASE("aggregation is order independent") {
    std::vector<FileEntry> entries = {
        {"a.c", false, "c", {10, 7, 2, 1}},
        {"b.c", false, "c", {4, 4, 0, 0}},
        {"c.py", false, "python", {6, 3, 2, 1}},
        {"blob", true, "", {}},
        {"d.py", false, "python", {1, 0, 0, 1}},
    };
    CodeMetrics reference = aggregate_files(entries);
    CHECK(reference.text_files == 4);
    CHECK(reference.binary_files == 1);
    CHECK(reference.totals.total == 21);

    std::mt19937 rng(3);
    for (int round = 0; round < 20; ++round) {
        std::shuffle(entries.begin(), entries.end(), rng);
        CHECK(aggregate_files(entries) == reference);
    }
}

TEST_CASE("text file count covers every language present") {
    TempDir dir;
    write(dir.path / "a.c", "x;\n");
    write(dir.path / "b.py", "x = 1\n");
    write(dir.path / "c.py", "y = 2\n");
    CodeMetrics metrics = aggregate_tree(dir.path);
    CHECK(metrics.text_files >= static_cast<std::int64_t>(metrics.per_language.size()));
}
