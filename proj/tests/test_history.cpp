#include <doctest.h>

#include <filesystem>

#include "git_fixture.hpp"
#include "sotp/error.hpp"
#include "sotp/repo_metrics.hpp"

using namespace sotp;
namespace fs = std::filesystem;

TEST_CASE("three-commit fixture buckets by committer date") {
    testing::GitFixture repo;
    repo.write_file("a.txt", "one\n");
    repo.commit("2024-01-10 12:00:00 +0000", "alice@example.org");
    repo.write_file("a.txt", "one\ntwo\n");
    repo.commit("2024-02-10 12:00:00 +0000", "bob@example.org");
    repo.write_file("b.txt", "three\n");
    repo.commit("2025-01-05 12:00:00 +0000", "Alice@Example.org");

    GitHistoryMetrics metrics = analyze_history(repo.path, Date{2025, 6, 1});

    CHECK(metrics.total_commits == 3);
    CHECK(metrics.developer_count == 2);  // alice counted once, case-folded
    CHECK(metrics.first_commit_date == Date{2024, 1, 10});
    CHECK(metrics.last_commit_date == Date{2025, 1, 5});

    // Five calendar years ending at the as_of year.
    REQUIRE(metrics.commits_by_year.size() == 5);
    CHECK(metrics.commits_by_year.at(2021) == 0);
    CHECK(metrics.commits_by_year.at(2022) == 0);
    CHECK(metrics.commits_by_year.at(2023) == 0);
    CHECK(metrics.commits_by_year.at(2024) == 2);
    CHECK(metrics.commits_by_year.at(2025) == 1);

    // Twelve calendar months ending at the as_of month; only 2025-01 hits.
    REQUIRE(metrics.commits_by_month.size() == 12);
    CHECK(metrics.commits_by_month.begin()->first == "2024-07");
    CHECK(metrics.commits_by_month.rbegin()->first == "2025-06");
    std::int64_t bucketed = 0;
    for (const auto& [month, count] : metrics.commits_by_month) bucketed += count;
    CHECK(bucketed == 1);
    CHECK(metrics.commits_by_month.at("2025-01") == 1);
    CHECK(bucketed <= metrics.total_commits);

    // a.txt: +1, then +1 (one line added); b.txt: +1.
    CHECK(metrics.lines_added == 3);
    CHECK(metrics.lines_deleted == 0);
}

TEST_CASE("single commit adding a ten-line file") {
    testing::GitFixture repo;
    repo.write_file("main.c",
                    "l1\nl2\nl3\nl4\nl5\nl6\nl7\nl8\nl9\nl10\n");
    repo.commit("2025-03-01 09:00:00 +0000", "dev@example.org");

    GitHistoryMetrics metrics = analyze_history(repo.path, Date{2025, 6, 1});
    CHECK(metrics.total_commits == 1);
    CHECK(metrics.lines_added == 10);
    CHECK(metrics.lines_deleted == 0);
}

TEST_CASE("deletions and binary deltas") {
    testing::GitFixture repo;
    repo.write_file("code.py", "a\nb\nc\nd\n");
    repo.commit("2025-01-01 00:00:00 +0000", "dev@example.org");
    repo.write_file("code.py", "a\n");  // deletes three lines
    std::string blob = "XX";
    blob += '\0';
    blob += "YY";
    repo.write_file("image.bin", blob);
    repo.commit("2025-01-02 00:00:00 +0000", "dev@example.org");

    GitHistoryMetrics metrics = analyze_history(repo.path, Date{2025, 6, 1});
    CHECK(metrics.total_commits == 2);
    CHECK(metrics.lines_added == 4);   // binary file contributes nothing
    CHECK(metrics.lines_deleted == 3);
}

TEST_CASE("commits dated at UTC day boundaries bucket by UTC") {
    testing::GitFixture repo;
    repo.write_file("x.txt", "x\n");
    // 01:30 +02:00 on Feb 1 is Jan 31 23:30 UTC.
    repo.commit("2025-02-01 01:30:00 +0200", "dev@example.org");

    GitHistoryMetrics metrics = analyze_history(repo.path, Date{2025, 6, 1});
    CHECK(metrics.commits_by_month.at("2025-01") == 1);
    CHECK(metrics.commits_by_month.at("2025-02") == 0);
    CHECK(metrics.last_commit_date == Date{2025, 1, 31});
}

TEST_CASE("empty repository reports no history") {
    testing::GitFixture repo;  // init only, no commits
    CHECK_THROWS_WITH_AS(analyze_history(repo.path, Date{2025, 6, 1}),
                         doctest::Contains("no commits"), Error);
}

TEST_CASE("a plain directory is not a repository") {
    fs::path dir = fs::temp_directory_path() / "sotp-not-a-repo";
    fs::create_directories(dir);
    CHECK_THROWS_WITH_AS(analyze_history(dir, Date{2025, 6, 1}),
                         doctest::Contains("not a version-controlled repository"), Error);
    fs::remove_all(dir);

    CHECK_THROWS_AS(analyze_history(fs::path{"/definitely/missing/path"}, Date{2025, 6, 1}),
                    Error);
}

TEST_CASE("history analysis is reproducible") {
    testing::GitFixture repo;
    repo.write_file("a.txt", "1\n2\n");
    repo.commit("2024-06-01 10:00:00 +0000", "dev@example.org");
    repo.write_file("a.txt", "1\n2\n3\n");
    repo.commit("2024-07-01 10:00:00 +0000", "dev@example.org");

    GitHistoryMetrics first = analyze_history(repo.path, Date{2025, 1, 1});
    GitHistoryMetrics second = analyze_history(repo.path, Date{2025, 1, 1});
    CHECK(first == second);
}
