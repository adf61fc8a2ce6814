/// @file gap_scanner.hpp
/// @brief Consecutive-prime gaps and the quantities derived from them: Andrica
/// differences, maximal-gap records, first occurrences, the running maximum.
#pragma once

#include "andrica/prime_engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace andrica {

/// Consecutive primes p < q.
struct PrimeGap
{
    u64 p = 0;
    u64 q = 0;
    u64 d = 0;

    PrimeGap() = default;
    PrimeGap(u64 p_, u64 q_) : p(p_), q(q_), d(q_ - p_) {}

    friend bool operator==(const PrimeGap&, const PrimeGap&) = default;
};

/// sqrt(q) - sqrt(p), always evaluated as d / (sqrt(q) + sqrt(p)).
///
/// Subtracting the roots directly cancels nearly every significant digit once p is
/// large: near 1.4e18 both roots are about 1.19e9 and differ by about 6e-7. The
/// roots are taken in long double, which holds every 64-bit integer exactly on x86.
inline double andrica_diff(u64 p, u64 q)
{
    const long double sp = std::sqrt(static_cast<long double>(p));
    const long double sq = std::sqrt(static_cast<long double>(q));
    return static_cast<double>(static_cast<long double>(q - p) / (sq + sp));
}

inline double andrica_diff(const PrimeGap& g)
{
    return andrica_diff(g.p, g.q);
}

/// A pair together with its Andrica difference and the index n of p (p = p_n).
struct AndricaPoint
{
    PrimeGap gap;
    u64 n = 0;
    double a = 0.0;
};

struct GapRecord
{
    u64 p_L = 0;
    u64 p_L1 = 0;
    u64 g = 0;
    double r = 0.0;

    friend bool operator==(const GapRecord&, const GapRecord&) = default;
};

enum class TableSource { computed, reference, merged };

inline const char* to_string(TableSource s)
{
    switch (s) {
    case TableSource::computed: return "computed";
    case TableSource::reference: return "reference";
    case TableSource::merged: return "merged";
    }
    return "?";
}

/// The step function G(x) as its list of records. Exhaustive below `limit`.
struct GapRecordTable
{
    std::vector<GapRecord> records;
    TableSource source = TableSource::computed;
    u64 limit = 0;
};

struct FirstOccurrence
{
    u64 d = 0;
    u64 p_f = 0;
};

struct RPoint
{
    u64 x = 0;
    double r = 0.0;
};

struct EnvelopePoint
{
    u64 p = 0;
    double running_max = 0.0;
};

struct AndricaReport
{
    bool all_below_one = true;
    double max_a = 0.0;
    std::optional<PrimeGap> argmax_pair;
    u64 count = 0;
};

namespace detail {

inline void require_limit(u64 limit)
{
    if (limit < 3) {
        throw std::invalid_argument("limit must be at least 3, got " + std::to_string(limit));
    }
}

// Strict weak order "x ranks above y": larger a first, then smaller p.
inline bool ranks_above(const AndricaPoint& x, const AndricaPoint& y)
{
    if (x.a != y.a) {
        return x.a > y.a;
    }
    return x.gap.p < y.gap.p;
}

} // namespace detail

/// Calls f(const PrimeGap&, u64 n) for every consecutive pair with q < limit, where
/// p is the n-th prime. The previous segment's last prime is carried across the
/// boundary so no gap is lost between segments.
template <typename F>
void for_each_gap(u64 limit, F&& f, const SieveOptions& opt = {})
{
    u64 prev = 0;
    u64 n = 0;
    for_each_prime(0, limit, [&](u64 p) {
        if (prev != 0) {
            f(PrimeGap{prev, p}, n);
        }
        prev = p;
        ++n;
    }, opt);
}

inline std::vector<PrimeGap> gap_stream(u64 limit, const SieveOptions& opt = {})
{
    detail::require_limit(limit);
    std::vector<PrimeGap> out;
    for_each_gap(limit, [&](const PrimeGap& g, u64) { out.push_back(g); }, opt);
    return out;
}

/// Incremental record builder; feed pairs in ascending order of p.
class RecordAccumulator
{
public:
    void add(const PrimeGap& g)
    {
        if (g.d > best_) {
            best_ = g.d;
            records_.push_back({g.p, g.q, g.d, andrica_diff(g)});
        }
    }

    GapRecordTable finish(u64 limit) &&
    {
        return {std::move(records_), TableSource::computed, limit};
    }

private:
    u64 best_ = 0;
    std::vector<GapRecord> records_;
};

/// Every pair whose gap strictly exceeds all earlier gaps, with q < limit.
inline GapRecordTable max_gap_records(u64 limit, const SieveOptions& opt = {})
{
    detail::require_limit(limit);
    RecordAccumulator acc;
    for_each_gap(limit, [&](const PrimeGap& g, u64) { acc.add(g); }, opt);
    return std::move(acc).finish(limit);
}

/// Smallest prime followed by each gap value occurring below limit.
inline std::map<u64, FirstOccurrence> first_occurrences(u64 limit, const SieveOptions& opt = {})
{
    detail::require_limit(limit);
    std::map<u64, FirstOccurrence> out;
    for_each_gap(limit, [&](const PrimeGap& g, u64) { out.try_emplace(g.d, FirstOccurrence{g.d, g.p}); }, opt);
    return out;
}

/// The k largest Andrica differences among pairs with q < limit, descending;
/// equal values order by smaller p.
inline std::vector<AndricaPoint> top_andrica(u64 limit, u64 k, const SieveOptions& opt = {})
{
    detail::require_limit(limit);
    if (k < 1) {
        throw std::invalid_argument("k must be at least 1");
    }
    // Min-heap on rank: the top is the weakest point kept so far.
    auto weaker_on_top = [](const AndricaPoint& x, const AndricaPoint& y) { return detail::ranks_above(x, y); };
    std::priority_queue<AndricaPoint, std::vector<AndricaPoint>, decltype(weaker_on_top)> heap(weaker_on_top);
    for_each_gap(limit, [&](const PrimeGap& g, u64 n) {
        AndricaPoint pt{g, n, andrica_diff(g)};
        if (heap.size() < k) {
            heap.push(pt);
        } else if (detail::ranks_above(pt, heap.top())) {
            heap.pop();
            heap.push(pt);
        }
    }, opt);
    std::vector<AndricaPoint> out;
    out.reserve(heap.size());
    while (!heap.empty()) {
        out.push_back(heap.top());
        heap.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
}

/// One (p_L, R) point per record; R is the record's square-root difference.
inline std::vector<RPoint> empirical_R(const GapRecordTable& table)
{
    std::vector<RPoint> out;
    out.reserve(table.records.size());
    for (const auto& rec : table.records) {
        out.push_back({rec.p_L, rec.r});
    }
    return out;
}

/// Running maximum of A_n over pairs with q < limit, as its change points.
/// The envelope value at any x is the last change point with p <= x.
inline std::vector<EnvelopePoint> andrica_envelope(u64 limit, const SieveOptions& opt = {})
{
    detail::require_limit(limit);
    std::vector<EnvelopePoint> out;
    double best = 0.0;
    for_each_gap(limit, [&](const PrimeGap& g, u64) {
        double a = andrica_diff(g);
        if (a > best) {
            best = a;
            out.push_back({g.p, a});
        }
    }, opt);
    return out;
}

/// Envelope value at x: max A over pairs with p <= x (0 before the first pair).
inline double envelope_at(std::span<const EnvelopePoint> env, u64 x)
{
    auto it = std::upper_bound(env.begin(), env.end(), x,
                               [](u64 v, const EnvelopePoint& e) { return v < e.p; });
    return it == env.begin() ? 0.0 : std::prev(it)->running_max;
}

inline AndricaReport verify_andrica(u64 limit, const SieveOptions& opt = {})
{
    detail::require_limit(limit);
    AndricaReport rep;
    for_each_gap(limit, [&](const PrimeGap& g, u64) {
        double a = andrica_diff(g);
        ++rep.count;
        if (!(a < 1.0)) {
            rep.all_below_one = false;
        }
        if (a > rep.max_a) {
            rep.max_a = a;
            rep.argmax_pair = g;
        }
    }, opt);
    return rep;
}

} // namespace andrica
