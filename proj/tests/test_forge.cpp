#include <doctest.h>

#include <map>

#include "sotp/error.hpp"
#include "sotp/forge.hpp"

using namespace sotp;

namespace {

/// Replays recorded responses keyed by request path.
class CannedClient : public HttpClient {
public:
    std::map<std::string, HttpResponse> responses;
    std::vector<std::string> requests;

    HttpResponse get(const std::string& host, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>&) override {
        requests.push_back(host + path);
        auto it = responses.find(path);
        if (it == responses.end()) return HttpResponse{404, "{}", {}};
        return it->second;
    }
};

HttpResponse ok(std::string body) { return HttpResponse{200, std::move(body), {}}; }

std::string issue_items(int total, int prs) {
    std::string body = "[";
    for (int i = 0; i < total; ++i) {
        if (i != 0) body += ",";
        if (i < prs)
            body += R"({"number": )" + std::to_string(i) + R"(, "pull_request": {}})";
        else
            body += R"({"number": )" + std::to_string(i) + "}";
    }
    return body + "]";
}

std::string pr_items(int n) {
    std::string body = "[";
    for (int i = 0; i < n; ++i) {
        if (i != 0) body += ",";
        body += R"({"number": )" + std::to_string(i) + "}";
    }
    return body + "]";
}

}  // namespace

TEST_CASE("remote URL parsing accepts github.com only") {
    RemoteRepo remote = parse_remote("https://github.com/acme/widget");
    CHECK(remote.owner == "acme");
    CHECK(remote.name == "widget");
    CHECK(parse_remote("https://github.com/acme/widget.git").name == "widget");
    CHECK(parse_remote("https://github.com/acme/widget/").name == "widget");
    CHECK(parse_remote("https://www.github.com/acme/widget").name == "widget");

    CHECK_THROWS_WITH_AS(parse_remote("https://gitlab.com/acme/widget"),
                         doctest::Contains("unsupported forge"), Error);
    CHECK_THROWS_AS(parse_remote("ssh://github.com/acme/widget"), Error);
    CHECK_THROWS_AS(parse_remote("https://github.com/acme"), Error);
}

TEST_CASE("recorded responses produce the seven counts") {
    CannedClient client;
    client.responses["/repos/acme/widget"] =
        ok(R"({"stargazers_count": 42, "forks_count": 7, "subscribers_count": 12})");
    client.responses["/repos/acme/widget/pulls?state=open&per_page=100"] = ok(pr_items(3));
    client.responses["/repos/acme/widget/pulls?state=closed&per_page=100"] = ok(pr_items(40));
    // The open issue listing conflates 5 PRs among 20 entries.
    client.responses["/repos/acme/widget/issues?state=open&per_page=100"] = ok(issue_items(20, 5));
    client.responses["/repos/acme/widget/issues?state=closed&per_page=100"] =
        ok(issue_items(8, 2));

    ForgeMetrics metrics = fetch_forge_metrics("https://github.com/acme/widget", std::nullopt,
                                               client, Timestamp{1754006400});
    CHECK(metrics.stars == 42);
    CHECK(metrics.forks == 7);
    CHECK(metrics.watchers == 12);
    CHECK(metrics.open_prs == 3);
    CHECK(metrics.closed_prs == 40);
    CHECK(metrics.open_issues == 15);  // 20 minus the 5 conflated PRs
    CHECK(metrics.closed_issues == 6);
    CHECK(metrics.fetched_at.unix_seconds == 1754006400);
}

TEST_CASE("pagination follows the Link header") {
    CannedClient client;
    client.responses["/repos/acme/widget"] =
        ok(R"({"stargazers_count": 1, "forks_count": 0, "subscribers_count": 0})");
    HttpResponse page1 = ok(pr_items(100));
    page1.headers["link"] =
        "<https://api.github.com/repos/acme/widget/pulls?state=open&per_page=100&page=2>; "
        "rel=\"next\", <https://api.github.com/...>; rel=\"last\"";
    client.responses["/repos/acme/widget/pulls?state=open&per_page=100"] = page1;
    client.responses["/repos/acme/widget/pulls?state=open&per_page=100&page=2"] = ok(pr_items(17));
    client.responses["/repos/acme/widget/pulls?state=closed&per_page=100"] = ok(pr_items(0));
    client.responses["/repos/acme/widget/issues?state=open&per_page=100"] = ok("[]");
    client.responses["/repos/acme/widget/issues?state=closed&per_page=100"] = ok("[]");

    ForgeMetrics metrics =
        fetch_forge_metrics("https://github.com/acme/widget", std::nullopt, client);
    CHECK(metrics.open_prs == 117);
}

TEST_CASE("auth and rate-limit responses map to typed failures") {
    CannedClient client;
    client.responses["/repos/acme/widget"] = HttpResponse{401, "{}", {}};
    CHECK_THROWS_WITH_AS(
        fetch_forge_metrics("https://github.com/acme/widget", std::nullopt, client),
        doctest::Contains("authentication required"), Error);

    HttpResponse limited{403, "{}", {}};
    limited.headers["x-ratelimit-remaining"] = "0";
    limited.headers["retry-after"] = "3600";
    client.responses["/repos/acme/widget"] = limited;
    CHECK_THROWS_WITH_AS(
        fetch_forge_metrics("https://github.com/acme/widget", std::nullopt, client),
        doctest::Contains("rate limited"), Error);

    client.responses["/repos/acme/widget"] = HttpResponse{500, "oops", {}};
    try {
        fetch_forge_metrics("https://github.com/acme/widget", std::nullopt, client);
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::network);
    }
}

TEST_CASE("snapshot round-trips the metrics") {
    ForgeMetrics metrics;
    metrics.stars = 42;
    metrics.forks = 7;
    metrics.watchers = 12;
    metrics.open_prs = 3;
    metrics.closed_prs = 40;
    metrics.open_issues = 15;
    metrics.closed_issues = 120;
    metrics.fetched_at = Timestamp::parse_iso8601("2026-08-10T12:00:00Z");

    std::string snapshot = serialize_forge_snapshot(metrics);
    ForgeMetrics loaded = load_forge_snapshot(snapshot);
    CHECK(loaded == metrics);
}

TEST_CASE("snapshot fields are mandatory, never defaulted") {
    std::string snapshot =
        "stars = 1\nforks = 2\nwatchers = 3\nopen_prs = 4\nclosed_prs = 5\n"
        "open_issues = 6\nfetched_at = 2026-01-01T00:00:00Z\n";
    CHECK_THROWS_WITH_AS(load_forge_snapshot(snapshot),
                         doctest::Contains("missing field 'closed_issues'"), Error);
}

TEST_CASE("negative snapshot counts are invalid") {
    std::string snapshot =
        "stars = -1\nforks = 2\nwatchers = 3\nopen_prs = 4\nclosed_prs = 5\n"
        "open_issues = 6\nclosed_issues = 7\nfetched_at = 2026-01-01T00:00:00Z\n";
    CHECK_THROWS_WITH_AS(load_forge_snapshot(snapshot), doctest::Contains("nonnegative"), Error);
}

TEST_CASE("malformed snapshot lines are syntax errors") {
    CHECK_THROWS_WITH_AS(load_forge_snapshot("stars\n"), doctest::Contains("expected"), Error);
    CHECK_THROWS_WITH_AS(load_forge_snapshot("stars = twelve\n"),
                         doctest::Contains("not an integer"), Error);
}
