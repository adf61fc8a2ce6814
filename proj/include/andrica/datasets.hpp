/// @file datasets.hpp
/// @brief Published maximal-gap record tables: parsing, validation, canonical
/// serialization and merging with computed tables.
///
/// Line format: `<gap> <prime>`, two base-10 integers separated by spaces or tabs.
/// `#` starts a comment that runs to the end of the line; blank lines are ignored.
/// Records appear in increasing gap order.
#pragma once

#include "andrica/gap_scanner.hpp"
#include "andrica/prime_engine.hpp"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace andrica {

struct ReferenceRecord
{
    u64 g = 0;
    u64 p_L = 0;

    friend bool operator==(const ReferenceRecord&, const ReferenceRecord&) = default;
};

struct ReferenceTable
{
    std::vector<ReferenceRecord> records;
    std::string provenance;
};

class ParseError : public std::runtime_error
{
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
    {
    }
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ConsistencyError : public std::runtime_error
{
public:
    explicit ConsistencyError(std::vector<std::string> mismatches)
        : std::runtime_error(join(mismatches)), mismatches_(std::move(mismatches))
    {
    }
    const std::vector<std::string>& mismatches() const noexcept { return mismatches_; }

private:
    static std::string join(const std::vector<std::string>& items)
    {
        std::string s = "record tables disagree:";
        for (const auto& m : items) {
            s += "\n  " + m;
        }
        return s;
    }
    std::vector<std::string> mismatches_;
};

class IoError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) {
        return {};
    }
    auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

inline std::string describe(const ReferenceRecord& r)
{
    return "(" + std::to_string(r.g) + ", " + std::to_string(r.p_L) + ")";
}

} // namespace detail

/// Throws ValidationError for non-increasing gaps or primes, or composite endpoints.
inline void validate(const ReferenceTable& table)
{
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        const auto& r = table.records[i];
        if (r.g == 0) {
            throw ValidationError("record " + detail::describe(r) + ": gap must be positive");
        }
        if (i > 0) {
            const auto& prev = table.records[i - 1];
            if (r.g <= prev.g || r.p_L <= prev.p_L) {
                throw ValidationError("record " + detail::describe(r) + " does not increase over " +
                                      detail::describe(prev));
            }
        }
        if (!is_prime(r.p_L)) {
            throw ValidationError("record " + detail::describe(r) + ": " + std::to_string(r.p_L) +
                                  " is not prime");
        }
        if (!is_prime(r.p_L + r.g)) {
            throw ValidationError("record " + detail::describe(r) + ": " + std::to_string(r.p_L + r.g) +
                                  " is not prime");
        }
    }
}

/// Parses and validates a table. Lines of the form `# source: ...` are collected
/// into the provenance, after the caller-supplied label.
inline ReferenceTable parse_reference_table(std::istream& in, std::string provenance = {})
{
    ReferenceTable table;
    table.provenance = std::move(provenance);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view body = line;
        if (auto hash = body.find('#'); hash != std::string_view::npos) {
            auto comment = detail::trim(body.substr(hash + 1));
            if (comment.starts_with("source:")) {
                if (!table.provenance.empty()) {
                    table.provenance += "; ";
                }
                table.provenance += detail::trim(comment.substr(7));
            }
            body = body.substr(0, hash);
        }
        body = detail::trim(body);
        if (body.empty()) {
            continue;
        }
        u64 fields[2] = {0, 0};
        std::size_t nfields = 0;
        std::size_t pos = 0;
        while (pos < body.size()) {
            while (pos < body.size() && (body[pos] == ' ' || body[pos] == '\t')) {
                ++pos;
            }
            if (pos == body.size()) {
                break;
            }
            if (nfields == 2) {
                throw ParseError(lineno, "expected exactly two integers");
            }
            const char* first = body.data() + pos;
            const char* last = body.data() + body.size();
            u64 value = 0;
            auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec == std::errc::result_out_of_range) {
                throw ParseError(lineno, "integer out of 64-bit range");
            }
            if (ec != std::errc{} || (ptr != last && *ptr != ' ' && *ptr != '\t')) {
                throw ParseError(lineno, "malformed integer '" + std::string(detail::trim(body.substr(pos))) + "'");
            }
            fields[nfields++] = value;
            pos = static_cast<std::size_t>(ptr - body.data());
        }
        if (nfields != 2) {
            throw ParseError(lineno, "expected exactly two integers");
        }
        if (fields[1] > std::numeric_limits<u64>::max() - fields[0]) {
            throw ParseError(lineno, "prime + gap overflows 64 bits");
        }
        table.records.push_back({fields[0], fields[1]});
    }
    validate(table);
    return table;
}

inline ReferenceTable parse_reference_table(std::string_view text, std::string provenance = {})
{
    std::istringstream in{std::string(text)};
    return parse_reference_table(in, std::move(provenance));
}

inline ReferenceTable load_reference_table(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open reference table '" + path.string() + "'");
    }
    return parse_reference_table(in, path.filename().string());
}

/// Canonical form: `<gap> <prime>\n` per record, no comments.
inline std::string serialize(const ReferenceTable& table)
{
    std::string out;
    for (const auto& r : table.records) {
        out += std::to_string(r.g);
        out += ' ';
        out += std::to_string(r.p_L);
        out += '\n';
    }
    return out;
}

inline GapRecordTable to_record_table(const ReferenceTable& ref)
{
    GapRecordTable t;
    t.source = TableSource::reference;
    for (const auto& r : ref.records) {
        t.records.push_back({r.p_L, r.p_L + r.g, r.g, andrica_diff(r.p_L, r.p_L + r.g)});
    }
    t.limit = t.records.empty() ? 0 : t.records.back().p_L1 + 1;
    return t;
}

/// Union of a computed and a reference table.
///
/// Both tables must agree on every gap value they share. A reference record whose
/// closing prime lies below the computed limit must also appear in the computed
/// table, since the computed table is exhaustive there.
inline GapRecordTable merge_records(const GapRecordTable& computed, const ReferenceTable& reference)
{
    if (computed.source != TableSource::computed) {
        throw std::invalid_argument("merge_records: first table must be computed");
    }
    std::vector<std::string> mismatches;
    std::map<u64, GapRecord> by_gap;
    for (const auto& rec : computed.records) {
        by_gap.emplace(rec.g, rec);
    }
    for (const auto& rec : to_record_table(reference).records) {
        auto it = by_gap.find(rec.g);
        if (it != by_gap.end()) {
            if (it->second.p_L != rec.p_L) {
                mismatches.push_back("gap " + std::to_string(rec.g) + ": computed p_L = " +
                                     std::to_string(it->second.p_L) + ", reference p_L = " +
                                     std::to_string(rec.p_L));
            }
            continue;
        }
        if (rec.p_L1 < computed.limit) {
            mismatches.push_back("gap " + std::to_string(rec.g) + " at " + std::to_string(rec.p_L) +
                                 " is below the computed limit " + std::to_string(computed.limit) +
                                 " but is not a computed record");
        }
        by_gap.emplace(rec.g, rec);
    }
    GapRecordTable merged;
    merged.source = TableSource::merged;
    for (const auto& [g, rec] : by_gap) {
        if (!merged.records.empty() && rec.p_L <= merged.records.back().p_L) {
            mismatches.push_back("gap " + std::to_string(g) + " at " + std::to_string(rec.p_L) +
                                 " breaks the increasing order after gap " +
                                 std::to_string(merged.records.back().g) + " at " +
                                 std::to_string(merged.records.back().p_L));
        }
        merged.records.push_back(rec);
    }
    if (!mismatches.empty()) {
        throw ConsistencyError(std::move(mismatches));
    }
    const u64 ref_limit = reference.records.empty() ? 0 : reference.records.back().p_L + reference.records.back().g + 1;
    merged.limit = std::max(computed.limit, ref_limit);
    return merged;
}

/// (p_L, R) for every reference record, R by the quotient form.
inline std::vector<RPoint> r_points_from_reference(const ReferenceTable& reference)
{
    std::vector<RPoint> out;
    out.reserve(reference.records.size());
    for (const auto& r : reference.records) {
        out.push_back({r.p_L, andrica_diff(r.p_L, r.p_L + r.g)});
    }
    return out;
}

} // namespace andrica
