#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sotp/dates.hpp"
#include "sotp/error.hpp"

namespace sotp {

class RateLimitedError : public Error {
public:
    RateLimitedError(std::string message, int retry_after_seconds)
        : Error(ErrorKind::network, std::move(message)),
          retry_after_seconds_(retry_after_seconds) {}

    int retry_after_seconds() const { return retry_after_seconds_; }

private:
    int retry_after_seconds_;
};

struct ForgeMetrics {
    std::int64_t stars = 0;
    std::int64_t forks = 0;
    std::int64_t watchers = 0;  // the forge's "subscribers" notion
    std::int64_t open_prs = 0;  // drafts included
    std::int64_t closed_prs = 0;
    std::int64_t open_issues = 0;  // pull requests excluded
    std::int64_t closed_issues = 0;
    Timestamp fetched_at;

    bool operator==(const ForgeMetrics&) const = default;
};

struct HttpResponse {
    int status = 0;
    std::string body;
    std::map<std::string, std::string> headers;  // lower-cased keys

    std::optional<std::string> header(std::string_view name) const;
};

/// Transport seam so fetches can be replayed from recorded responses.
class HttpClient {
public:
    virtual ~HttpClient() = default;
    virtual HttpResponse get(const std::string& host, const std::string& path,
                             const std::vector<std::pair<std::string, std::string>>& headers) = 0;
};

std::unique_ptr<HttpClient> make_https_client();

struct RemoteRepo {
    std::string host;
    std::string owner;
    std::string name;
};

/// Accepts https://github.com/<owner>/<repo>[.git] style URLs; anything
/// else is an unsupported forge.
RemoteRepo parse_remote(const std::string& url);

using Sleeper = std::function<void(int seconds)>;

/// Collects the seven counts from a GitHub-style REST API. The issue
/// listing conflates pull requests, so PR entries are subtracted from the
/// issue counts. A rate-limited response is retried once after the
/// advertised wait (when it is short enough to honor).
ForgeMetrics fetch_forge_metrics(const std::string& remote_url,
                                 const std::optional<std::string>& token, HttpClient& client,
                                 std::optional<Timestamp> now = std::nullopt,
                                 const Sleeper& sleeper = nullptr);

/// Flat key/value snapshot so assessments replay offline.
std::string serialize_forge_snapshot(const ForgeMetrics& metrics);
ForgeMetrics load_forge_snapshot(std::string_view text);

}  // namespace sotp
