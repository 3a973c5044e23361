#include "sotp/derived.hpp"

#include <fmt/format.h>

#include "sotp/error.hpp"

namespace sotp {

const char* status_name(PackageStatus status) {
    return status == PackageStatus::alive ? "alive" : "dead";
}

PackageStatus compute_status(const Date& last_commit, const std::optional<Date>& last_release,
                             const Date& as_of) {
    if (date_before(as_of, last_commit))
        throw Error(ErrorKind::validation,
                    fmt::format("last commit {} is after the assessment date {}",
                                last_commit.to_string(), as_of.to_string()));
    Date last_activity = last_commit;
    if (last_release && date_before(last_activity, *last_release)) last_activity = *last_release;
    Date threshold = add_months(as_of, -18);
    return date_on_or_after(last_activity, threshold) ? PackageStatus::alive : PackageStatus::dead;
}

std::optional<double> pct_issues_closed(std::int64_t open, std::int64_t closed) {
    if (open < 0 || closed < 0)
        throw Error(ErrorKind::validation, "issue counts must be nonnegative");
    if (open + closed == 0) return std::nullopt;
    return 100.0 * static_cast<double>(closed) / static_cast<double>(open + closed);
}

std::optional<double> pct_comments(const LineCounts& counts) {
    std::int64_t denominator = counts.code + counts.comment;
    if (denominator == 0) return std::nullopt;
    return 100.0 * static_cast<double>(counts.comment) / static_cast<double>(denominator);
}

}  // namespace sotp
