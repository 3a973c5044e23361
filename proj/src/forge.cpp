#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "sotp/forge.hpp"

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <chrono>

#include "sotp/error.hpp"

namespace sotp {

using nlohmann::json;

std::optional<std::string> HttpResponse::header(std::string_view name) const {
    std::string key{name};
    std::transform(key.begin(), key.end(), key.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    auto it = headers.find(key);
    if (it == headers.end()) return std::nullopt;
    return it->second;
}

namespace {

class HttplibClient : public HttpClient {
public:
    HttpResponse get(const std::string& host, const std::string& path,
                     const std::vector<std::pair<std::string, std::string>>& headers) override {
        httplib::SSLClient client(host);
        client.set_follow_location(true);
        client.set_connection_timeout(15);
        client.set_read_timeout(30);
        httplib::Headers hdrs;
        for (const auto& [k, v] : headers) hdrs.emplace(k, v);
        auto res = client.Get(path, hdrs);
        if (!res)
            throw Error(ErrorKind::network,
                        fmt::format("request to {}{} failed: {}", host, path,
                                    httplib::to_string(res.error())));
        HttpResponse out;
        out.status = res->status;
        out.body = res->body;
        for (const auto& [k, v] : res->headers) {
            std::string key = k;
            std::transform(key.begin(), key.end(), key.begin(),
                           [](unsigned char c) { return std::tolower(c); });
            out.headers[key] = v;
        }
        return out;
    }
};

json parse_json(const HttpResponse& response, const std::string& path) {
    json doc = json::parse(response.body, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::network, fmt::format("malformed JSON from {}", path));
    return doc;
}

std::int64_t require_count(const json& doc, const char* field, const std::string& path) {
    if (!doc.contains(field) || !doc[field].is_number_integer())
        throw Error(ErrorKind::network,
                    fmt::format("response from {} lacks integer field '{}'", path, field));
    auto value = doc[field].get<std::int64_t>();
    if (value < 0)
        throw Error(ErrorKind::network, fmt::format("negative count in '{}' from {}", field, path));
    return value;
}

/// Extracts the rel="next" target out of an RFC 5988 Link header.
std::optional<std::string> next_link(const HttpResponse& response) {
    auto link = response.header("link");
    if (!link) return std::nullopt;
    std::size_t pos = 0;
    while (pos < link->size()) {
        std::size_t open = link->find('<', pos);
        std::size_t close = link->find('>', open);
        if (open == std::string::npos || close == std::string::npos) return std::nullopt;
        std::string url = link->substr(open + 1, close - open - 1);
        std::size_t semi = link->find(';', close);
        std::size_t comma = link->find(',', close);
        std::string rel = link->substr(semi == std::string::npos ? close : semi,
                                       comma == std::string::npos ? std::string::npos
                                                                  : comma - semi);
        if (rel.find("rel=\"next\"") != std::string::npos) {
            // Strip scheme and host; the client takes paths.
            std::size_t scheme = url.find("://");
            if (scheme != std::string::npos) {
                std::size_t slash = url.find('/', scheme + 3);
                if (slash != std::string::npos) return url.substr(slash);
            }
            return url;
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return std::nullopt;
}

void check_status(const HttpResponse& response, const std::string& path) {
    if (response.status == 200) return;
    if (response.status == 401)
        throw Error(ErrorKind::network,
                    fmt::format("authentication required for {} (set the API token)", path));
    if (response.status == 429 ||
        (response.status == 403 && response.header("x-ratelimit-remaining") == "0")) {
        std::string retry = response.header("retry-after").value_or("unknown");
        int seconds = 30;
        if (auto header = response.header("retry-after"))
            seconds = std::max(1, std::atoi(header->c_str()));
        throw RateLimitedError(
            fmt::format("rate limited on {} (retry after: {})", path, retry), seconds);
    }
    if (response.status == 403)
        throw Error(ErrorKind::network,
                    fmt::format("access forbidden for {} (token may be required)", path));
    throw Error(ErrorKind::network,
                fmt::format("unexpected HTTP {} from {}", response.status, path));
}

struct Pager {
    HttpClient& client;
    std::string host;
    std::vector<std::pair<std::string, std::string>> headers;

    /// Visits every element of a paginated array endpoint.
    template <typename Fn>
    void for_each(std::string path, Fn&& fn) {
        while (true) {
            HttpResponse response = client.get(host, path, headers);
            check_status(response, path);
            json doc = parse_json(response, path);
            if (!doc.is_array())
                throw Error(ErrorKind::network, fmt::format("expected array from {}", path));
            for (const json& item : doc) fn(item);
            auto next = next_link(response);
            if (!next) return;
            path = *next;
        }
    }
};

constexpr const char* kApiHost = "api.github.com";

}  // namespace

std::unique_ptr<HttpClient> make_https_client() { return std::make_unique<HttplibClient>(); }

RemoteRepo parse_remote(const std::string& url) {
    std::string_view rest = url;
    if (rest.starts_with("https://"))
        rest.remove_prefix(8);
    else if (rest.starts_with("http://"))
        rest.remove_prefix(7);
    else
        throw Error(ErrorKind::validation,
                    fmt::format("unsupported forge URL '{}': expected https://github.com/...",
                                url));
    if (!rest.starts_with("github.com/") && !rest.starts_with("www.github.com/"))
        throw Error(ErrorKind::validation,
                    fmt::format("unsupported forge host in '{}': only github.com is supported",
                                url));
    rest.remove_prefix(rest.find('/') + 1);
    std::size_t slash = rest.find('/');
    if (slash == std::string_view::npos || slash == 0)
        throw Error(ErrorKind::validation,
                    fmt::format("cannot extract owner/repository from '{}'", url));
    std::string owner{rest.substr(0, slash)};
    std::string name{rest.substr(slash + 1)};
    while (!name.empty() && name.back() == '/') name.pop_back();
    if (name.ends_with(".git")) name.resize(name.size() - 4);
    if (std::size_t extra = name.find('/'); extra != std::string::npos) name.resize(extra);
    if (name.empty())
        throw Error(ErrorKind::validation,
                    fmt::format("cannot extract owner/repository from '{}'", url));
    return RemoteRepo{"github.com", owner, name};
}

namespace {

ForgeMetrics fetch_once(const RemoteRepo& remote,
                        const std::vector<std::pair<std::string, std::string>>& headers,
                        HttpClient& client);

}  // namespace

ForgeMetrics fetch_forge_metrics(const std::string& remote_url,
                                 const std::optional<std::string>& token, HttpClient& client,
                                 std::optional<Timestamp> now, const Sleeper& sleeper) {
    RemoteRepo remote = parse_remote(remote_url);

    std::vector<std::pair<std::string, std::string>> headers = {
        {"Accept", "application/vnd.github+json"},
        {"User-Agent", "sotp-toolkit"},
    };
    if (token && !token->empty()) headers.emplace_back("Authorization", "Bearer " + *token);

    std::string repo_path = fmt::format("/repos/{}/{}", remote.owner, remote.name);
    HttpResponse repo_response = client.get(kApiHost, repo_path, headers);
    check_status(repo_response, repo_path);
    json repo = parse_json(repo_response, repo_path);

    ForgeMetrics metrics;
    metrics.stars = require_count(repo, "stargazers_count", repo_path);
    metrics.forks = require_count(repo, "forks_count", repo_path);
    metrics.watchers = require_count(repo, "subscribers_count", repo_path);

    Pager pager{client, kApiHost, headers};
    for (const char* state : {"open", "closed"}) {
        std::int64_t prs = 0;
        pager.for_each(fmt::format("{}/pulls?state={}&per_page=100", repo_path, state),
                       [&](const json&) { ++prs; });
        std::int64_t issues = 0;  // issue listing includes PRs; skip those
        pager.for_each(fmt::format("{}/issues?state={}&per_page=100", repo_path, state),
                       [&](const json& item) {
                           if (!item.contains("pull_request")) ++issues;
                       });
        if (std::string_view(state) == "open") {
            metrics.open_prs = prs;
            metrics.open_issues = issues;
        } else {
            metrics.closed_prs = prs;
            metrics.closed_issues = issues;
        }
    }

    metrics.fetched_at = now.value_or(Timestamp{
        std::chrono::duration_cast<std::chrono::seconds>(
            std::chrono::system_clock::now().time_since_epoch())
            .count()});
    return metrics;
}

namespace {

struct SnapshotField {
    const char* name;
    std::int64_t ForgeMetrics::* member;
};

constexpr SnapshotField kSnapshotFields[] = {
    {"stars", &ForgeMetrics::stars},
    {"forks", &ForgeMetrics::forks},
    {"watchers", &ForgeMetrics::watchers},
    {"open_prs", &ForgeMetrics::open_prs},
    {"closed_prs", &ForgeMetrics::closed_prs},
    {"open_issues", &ForgeMetrics::open_issues},
    {"closed_issues", &ForgeMetrics::closed_issues},
};

}  // namespace

std::string serialize_forge_snapshot(const ForgeMetrics& metrics) {
    std::string out = "# forge metrics snapshot\n";
    for (const SnapshotField& f : kSnapshotFields)
        out += fmt::format("{} = {}\n", f.name, metrics.*(f.member));
    out += fmt::format("fetched_at = {}\n", metrics.fetched_at.to_iso8601());
    out += "# open_prs includes draft pull requests\n";
    return out;
}

ForgeMetrics load_forge_snapshot(std::string_view text) {
    ForgeMetrics metrics;
    std::map<std::string, std::string> fields;

    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        std::string_view line = eol == std::string_view::npos ? text.substr(pos)
                                                              : text.substr(pos, eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (line.ends_with('\r')) line.remove_suffix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.front())))
            line.remove_prefix(1);
        while (!line.empty() && std::isspace(static_cast<unsigned char>(line.back())))
            line.remove_suffix(1);
        if (line.empty() || line.starts_with('#')) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw Error(ErrorKind::validation,
                        fmt::format("snapshot line {}: expected 'key = value'", line_no));
        std::string key{line.substr(0, eq)};
        std::string value{line.substr(eq + 1)};
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(value.begin());
        if (!fields.emplace(key, value).second)
            throw Error(ErrorKind::validation,
                        fmt::format("snapshot line {}: duplicate field '{}'", line_no, key));
    }

    for (const SnapshotField& f : kSnapshotFields) {
        auto it = fields.find(f.name);
        if (it == fields.end())
            throw Error(ErrorKind::validation,
                        fmt::format("snapshot is missing field '{}'", f.name));
        errno = 0;
        char* end = nullptr;
        long long value = std::strtoll(it->second.c_str(), &end, 10);
        if (end != it->second.c_str() + it->second.size() || it->second.empty())
            throw Error(ErrorKind::validation,
                        fmt::format("snapshot field '{}' is not an integer", f.name));
        if (value < 0)
            throw Error(ErrorKind::validation,
                        fmt::format("snapshot field '{}' must be nonnegative", f.name));
        metrics.*(f.member) = value;
    }
    auto it = fields.find("fetched_at");
    if (it == fields.end())
        throw Error(ErrorKind::validation, "snapshot is missing field 'fetched_at'");
    metrics.fetched_at = Timestamp::parse_iso8601(it->second);
    return metrics;
}

}  // namespace sotp
