#include "sotp/ledger.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <set>

#include "sotp/error.hpp"

namespace sotp {

using nlohmann::json;

const char* package_state_name(PackageState state) {
    switch (state) {
        case PackageState::candidate: return "candidate";
        case PackageState::filtered: return "filtered";
        case PackageState::selected: return "selected";
    }
    return "unknown";
}

const char* filter_kind_name(FilterKind kind) {
    switch (kind) {
        case FilterKind::scope: return "scope";
        case FilterKind::usage: return "usage";
        case FilterKind::age: return "age";
    }
    return "unknown";
}

const PackageRecord* PackageLedger::find(std::string_view package_id) const {
    for (const PackageRecord& r : records)
        if (r.id == package_id) return &r;
    return nullptr;
}

std::size_t PackageLedger::count_in(PackageState state) const {
    return static_cast<std::size_t>(
        std::count_if(records.begin(), records.end(),
                      [state](const PackageRecord& r) { return r.state == state; }));
}

std::vector<std::string> PackageLedger::selected_ids() const {
    std::vector<std::string> ids;
    for (const PackageRecord& r : records)
        if (r.state == PackageState::selected) ids.push_back(r.id);
    return ids;
}

void PackageLedger::check_invariants() const {
    if (initial_count != records.size())
        throw Error(ErrorKind::validation,
                    fmt::format("ledger initial_count {} does not match {} records",
                                initial_count, records.size()));
    std::set<std::string> seen;
    for (const PackageRecord& r : records) {
        if (r.id.empty())
            throw Error(ErrorKind::validation, "ledger record with empty package id");
        if (!seen.insert(r.id).second)
            throw Error(ErrorKind::validation,
                        fmt::format("duplicate package id '{}' in ledger", r.id));
        if ((r.state == PackageState::filtered) != r.filter_reason.has_value())
            throw Error(ErrorKind::validation,
                        fmt::format("package '{}': filtered state and filter_reason must "
                                    "accompany each other",
                                    r.id));
        if (r.state == PackageState::selected && !r.eligibility.all())
            throw Error(ErrorKind::validation,
                        fmt::format("package '{}' is selected but fails an eligibility flag",
                                    r.id));
    }
}

namespace {

/// Audit timestamps anchor to the assessment date, keeping replays
/// byte-identical.
Timestamp event_time(const Date& as_of) {
    Date d = as_of.normalized();
    return Timestamp{days_from_civil(d.year, d.month, d.day) * 86400};
}

void filter_record(PackageLedger& ledger, PackageRecord& record, FilterKind kind,
                   std::string note) {
    LedgerEvent event;
    event.timestamp = event_time(ledger.as_of);
    event.package_id = record.id;
    event.from = record.state;
    event.to = PackageState::filtered;
    event.reason = fmt::format("{}: {}", filter_kind_name(kind), note);
    ledger.events.push_back(std::move(event));

    record.state = PackageState::filtered;
    record.filter_reason = FilterReason{kind, std::move(note)};
}

std::size_t unfiltered_count(const PackageLedger& ledger) {
    return ledger.records.size() - ledger.count_in(PackageState::filtered);
}

}  // namespace

PackageLedger apply_filters(PackageLedger ledger, std::size_t target_size,
                            const Date& age_threshold) {
    ledger.check_invariants();

    // Scope pass: drop records judged outside the narrowed domain scope.
    if (unfiltered_count(ledger) > target_size) {
        for (PackageRecord& r : ledger.records) {
            if (r.state == PackageState::filtered) continue;
            if (!r.scope_ok.has_value())
                throw Error(ErrorKind::validation,
                            fmt::format("package '{}' lacks the scope judgment required by the "
                                        "scope filter",
                                        r.id));
            if (!*r.scope_ok)
                filter_record(ledger, r, FilterKind::scope,
                              "functionality falls outside the narrowed domain scope");
        }
    }

    // Usage pass: drop records whose installation is not clear to follow.
    if (unfiltered_count(ledger) > target_size) {
        for (PackageRecord& r : ledger.records) {
            if (r.state == PackageState::filtered) continue;
            if (!r.usage_ok.has_value())
                throw Error(ErrorKind::validation,
                            fmt::format("package '{}' lacks the usage judgment required by the "
                                        "usage filter",
                                        r.id));
            if (!*r.usage_ok)
                filter_record(ledger, r, FilterKind::usage,
                              "installation procedure is not clear and easy to follow");
        }
    }

    // Age pass: drop the oldest remaining records one at a time.
    // Records marked highly recommended and currently in use survive, as do
    // records newer than the threshold.
    while (unfiltered_count(ledger) > target_size) {
        PackageRecord* oldest = nullptr;
        for (PackageRecord& r : ledger.records) {
            if (r.state == PackageState::filtered || r.recommended_override) continue;
            if (!r.last_change.has_value())
                throw Error(ErrorKind::validation,
                            fmt::format("package '{}' lacks the last-change date required by "
                                        "the age filter",
                                        r.id));
            if (!date_before(*r.last_change, age_threshold)) continue;
            if (oldest == nullptr || date_before(*r.last_change, *oldest->last_change) ||
                (*r.last_change == *oldest->last_change && r.id < oldest->id))
                oldest = &r;
        }
        if (oldest == nullptr) break;  // nothing old enough remains
        filter_record(ledger, *oldest, FilterKind::age,
                      fmt::format("no changes since {}", oldest->last_change->to_string()));
    }

    // Survivors are the selected list.
    for (PackageRecord& r : ledger.records) {
        if (r.state != PackageState::candidate) continue;
        if (!r.eligibility.all())
            throw Error(ErrorKind::validation,
                        fmt::format("package '{}' survives the filters but fails an eligibility "
                                    "flag; fix the record or supply a filter judgment",
                                    r.id));
        LedgerEvent event;
        event.timestamp = event_time(ledger.as_of);
        event.package_id = r.id;
        event.from = r.state;
        event.to = PackageState::selected;
        event.reason = "passed all filters";
        ledger.events.push_back(std::move(event));
        r.state = PackageState::selected;
    }

    ledger.check_invariants();
    return ledger;
}

namespace {

PackageState state_from_name(const std::string& name) {
    if (name == "candidate") return PackageState::candidate;
    if (name == "filtered") return PackageState::filtered;
    if (name == "selected") return PackageState::selected;
    throw Error(ErrorKind::validation, fmt::format("unknown package state '{}'", name));
}

FilterKind filter_from_name(const std::string& name) {
    if (name == "scope") return FilterKind::scope;
    if (name == "usage") return FilterKind::usage;
    if (name == "age") return FilterKind::age;
    throw Error(ErrorKind::validation, fmt::format("unknown filter kind '{}'", name));
}

}  // namespace

std::string serialize_ledger(const PackageLedger& ledger) {
    json doc;
    doc["as_of"] = ledger.as_of.to_string();
    doc["initial_count"] = ledger.initial_count;
    doc["records"] = json::array();
    for (const PackageRecord& r : ledger.records) {
        json record;
        record["id"] = r.id;
        record["name"] = r.name;
        if (r.url) record["url"] = *r.url;
        record["eligibility"] = {{"in_scope", r.eligibility.in_scope},
                                 {"source_viewable", r.eligibility.source_viewable},
                                 {"metrics_available", r.eligibility.metrics_available},
                                 {"not_incomplete", r.eligibility.not_incomplete}};
        record["state"] = package_state_name(r.state);
        if (r.filter_reason)
            record["filter_reason"] = {{"kind", filter_kind_name(r.filter_reason->kind)},
                                       {"note", r.filter_reason->note}};
        if (r.recommended_override) record["recommended_override"] = true;
        if (r.scope_ok) record["scope_ok"] = *r.scope_ok;
        if (r.usage_ok) record["usage_ok"] = *r.usage_ok;
        if (r.last_change) record["last_change"] = r.last_change->to_string();
        if (r.repo_path) record["repo_path"] = *r.repo_path;
        doc["records"].push_back(std::move(record));
    }
    doc["events"] = json::array();
    for (const LedgerEvent& e : ledger.events)
        doc["events"].push_back({{"timestamp", e.timestamp.to_iso8601()},
                                 {"package", e.package_id},
                                 {"from", package_state_name(e.from)},
                                 {"to", package_state_name(e.to)},
                                 {"reason", e.reason}});
    return doc.dump(2) + "\n";
}

PackageLedger load_ledger(std::string_view text) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw Error(ErrorKind::validation, "ledger is not valid JSON");
    PackageLedger ledger;
    try {
        ledger.as_of = Date::parse(doc.at("as_of").get<std::string>());
        for (const json& record : doc.at("records")) {
            PackageRecord r;
            r.id = record.at("id").get<std::string>();
            r.name = record.value("name", r.id);
            if (record.contains("url")) r.url = record["url"].get<std::string>();
            if (record.contains("eligibility")) {
                const json& e = record["eligibility"];
                r.eligibility.in_scope = e.value("in_scope", false);
                r.eligibility.source_viewable = e.value("source_viewable", false);
                r.eligibility.metrics_available = e.value("metrics_available", false);
                r.eligibility.not_incomplete = e.value("not_incomplete", false);
            }
            r.state = state_from_name(record.value("state", "candidate"));
            if (record.contains("filter_reason"))
                r.filter_reason =
                    FilterReason{filter_from_name(record["filter_reason"].at("kind")),
                                 record["filter_reason"].value("note", "")};
            r.recommended_override = record.value("recommended_override", false);
            if (record.contains("scope_ok")) r.scope_ok = record["scope_ok"].get<bool>();
            if (record.contains("usage_ok")) r.usage_ok = record["usage_ok"].get<bool>();
            if (record.contains("last_change"))
                r.last_change = Date::parse(record["last_change"].get<std::string>());
            if (record.contains("repo_path")) r.repo_path = record["repo_path"].get<std::string>();
            ledger.records.push_back(std::move(r));
        }
        ledger.initial_count = doc.value("initial_count", ledger.records.size());
        if (doc.contains("events")) {
            for (const json& e : doc["events"]) {
                LedgerEvent event;
                event.timestamp = Timestamp::parse_iso8601(e.at("timestamp").get<std::string>());
                event.package_id = e.at("package").get<std::string>();
                event.from = state_from_name(e.at("from").get<std::string>());
                event.to = state_from_name(e.at("to").get<std::string>());
                event.reason = e.value("reason", "");
                ledger.events.push_back(std::move(event));
            }
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::validation, fmt::format("malformed ledger: {}", e.what()));
    }
    ledger.check_invariants();
    return ledger;
}

}  // namespace sotp
