#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sotp/dates.hpp"

namespace sotp {

enum class PackageState { candidate, filtered, selected };
enum class FilterKind { scope, usage, age };

const char* package_state_name(PackageState state);
const char* filter_kind_name(FilterKind kind);

struct EligibilityFlags {
    bool in_scope = false;
    bool source_viewable = false;
    bool metrics_available = false;
    bool not_incomplete = false;

    bool all() const { return in_scope && source_viewable && metrics_available && not_incomplete; }
    bool operator==(const EligibilityFlags&) const = default;
};

struct FilterReason {
    FilterKind kind = FilterKind::scope;
    std::string note;

    bool operator==(const FilterReason&) const = default;
};

struct PackageRecord {
    std::string id;
    std::string name;
    std::optional<std::string> url;
    EligibilityFlags eligibility;
    PackageState state = PackageState::candidate;
    std::optional<FilterReason> filter_reason;  // present iff state == filtered
    bool recommended_override = false;          // survives the age filter

    // Assessor-supplied judgments the filter passes consume.
    std::optional<bool> scope_ok;   // still in scope after narrowing
    std::optional<bool> usage_ok;   // installation clear and easy to follow
    std::optional<Date> last_change;

    std::optional<std::string> repo_path;  // local clone, workspace-relative
};

struct LedgerEvent {
    Timestamp timestamp;
    std::string package_id;
    PackageState from = PackageState::candidate;
    PackageState to = PackageState::candidate;
    std::string reason;
};

struct PackageLedger {
    Date as_of;
    std::size_t initial_count = 0;
    std::vector<PackageRecord> records;
    std::vector<LedgerEvent> events;  // append-only audit trail

    const PackageRecord* find(std::string_view package_id) const;
    std::size_t count_in(PackageState state) const;
    std::vector<std::string> selected_ids() const;

    void check_invariants() const;  // throws Error(validation)
};

inline constexpr int kDefaultTargetSize = 30;

/// Applies the candidate filters in priority order (scope, usage, age).
/// A judgment pass removes every failing record; the age pass removes the
/// oldest survivors one at a time until the target size is met, skipping
/// records marked recommended_override and records newer than
/// age_threshold. Filtered records keep their reason; nothing is deleted.
/// Survivors become selected.
PackageLedger apply_filters(PackageLedger ledger, std::size_t target_size,
                            const Date& age_threshold);

std::string serialize_ledger(const PackageLedger& ledger);
PackageLedger load_ledger(std::string_view text);

}  // namespace sotp
