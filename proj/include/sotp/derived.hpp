#pragma once

#include <optional>

#include "sotp/dates.hpp"
#include "sotp/repo_metrics.hpp"

namespace sotp {

enum class PackageStatus { alive, dead };

const char* status_name(PackageStatus status);

/// Alive when the most recent commit or release falls within the 18
/// calendar months before as_of, boundary inclusive.
PackageStatus compute_status(const Date& last_commit, const std::optional<Date>& last_release,
                             const Date& as_of);

/// 100 * closed / (open + closed); nullopt when there are no issues.
std::optional<double> pct_issues_closed(std::int64_t open, std::int64_t closed);

/// 100 * comment / (code + comment); nullopt when both are zero. Blank
/// lines are excluded from the denominator.
std::optional<double> pct_comments(const LineCounts& counts);

struct DerivedMetrics {
    PackageStatus status = PackageStatus::dead;
    std::optional<double> issues_closed_pct;
    std::optional<double> comments_pct;
    Date as_of;
};

}  // namespace sotp
