/// @file prime_engine.hpp
/// @brief Segmented, odd-only, bit-packed sieve of Eratosthenes over 64-bit ranges,
/// exact prime counting and deterministic 64-bit primality.
#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace andrica {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Tuning knobs for the segmented sieve. Results never depend on them.
struct SieveOptions
{
    /// Odd entries (bits) per segment. Rounded up to a multiple of 64.
    std::size_t segment_length = std::size_t{1} << 20;
    /// Segments sieved concurrently; delivery is always in ordinal order.
    unsigned threads = 1;
    /// When false, a request that does not fit in one segment is rejected.
    bool auto_split = true;
};

class RangeTooLarge : public std::length_error
{
public:
    using std::length_error::length_error;
};

/// Half-open window [lo, hi) with its ordinal inside a tiling.
struct Segment
{
    u64 lo = 0;
    u64 hi = 0;
    std::size_t index = 0;
};

namespace detail {

inline u64 isqrt(u64 n)
{
    auto r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) {
        --r;
    }
    while (static_cast<u128>(r + 1) * (r + 1) <= n) {
        ++r;
    }
    return r;
}

inline u64 mulmod(u64 a, u64 b, u64 m)
{
    return static_cast<u64>(static_cast<u128>(a) * b % m);
}

inline u64 powmod(u64 base, u64 exp, u64 m)
{
    u64 result = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) {
            result = mulmod(result, base, m);
        }
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return result;
}

// Strong probable-prime test to base a; n odd, n > a.
inline bool sprp(u64 n, u64 a)
{
    u64 d = n - 1;
    int s = std::countr_zero(d);
    d >>= s;
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) {
        return true;
    }
    for (int r = 1; r < s; ++r) {
        x = mulmod(x, x, n);
        if (x == n - 1) {
            return true;
        }
    }
    return false;
}

inline bool miller_rabin(u64 n)
{
    // The first twelve primes as witnesses are deterministic below 3.3e24.
    constexpr u64 witnesses[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
    if (n < 2) {
        return false;
    }
    for (u64 p : witnesses) {
        if (n % p == 0) {
            return n == p;
        }
    }
    for (u64 a : witnesses) {
        if (!sprp(n, a)) {
            return false;
        }
    }
    return true;
}

inline constexpr u64 small_table_limit = u64{1} << 20;

// Plain sieve over odd numbers below small_table_limit; bit i <-> 2i+1.
inline const std::vector<bool>& small_table()
{
    static const std::vector<bool> table = [] {
        std::vector<bool> odd(small_table_limit / 2, true);
        odd[0] = false;
        for (u64 i = 3; i * i < small_table_limit; i += 2) {
            if (odd[i / 2]) {
                for (u64 j = i * i; j < small_table_limit; j += 2 * i) {
                    odd[j / 2] = false;
                }
            }
        }
        return odd;
    }();
    return table;
}

/// Odd primes p <= limit, ascending.
inline std::vector<std::uint32_t> odd_base_primes(u64 limit)
{
    std::vector<std::uint32_t> out;
    if (limit < 3) {
        return out;
    }
    if (limit < small_table_limit) {
        const auto& t = small_table();
        for (u64 n = 3; n <= limit; n += 2) {
            if (t[n / 2]) {
                out.push_back(static_cast<std::uint32_t>(n));
            }
        }
        return out;
    }
    // limit < 2^32 here, so a flat odd-only byte sieve is enough.
    std::vector<std::uint8_t> odd(limit / 2 + 1, 1);
    odd[0] = 0;
    for (u64 i = 3; i * i <= limit; i += 2) {
        if (odd[i / 2]) {
            for (u64 j = i * i; j <= limit; j += 2 * i) {
                odd[j / 2] = 0;
            }
        }
    }
    out.reserve(static_cast<std::size_t>(1.2 * limit / std::log(static_cast<double>(limit))));
    for (u64 k = 1; k < odd.size(); ++k) {
        if (odd[k] && 2 * k + 1 <= limit) {
            out.push_back(static_cast<std::uint32_t>(2 * k + 1));
        }
    }
    return out;
}

inline std::size_t rounded_segment_length(const SieveOptions& opt)
{
    if (opt.segment_length == 0) {
        throw std::invalid_argument("segment length must be positive");
    }
    if (opt.threads == 0) {
        throw std::invalid_argument("thread count must be at least 1");
    }
    return (opt.segment_length + 63) / 64 * 64;
}

/// Bit-packed odd-only view of one sieved segment.
struct SieveBits
{
    u64 first_odd = 1;        // value of bit 0
    std::size_t nbits = 0;    // odd candidates in the segment
    bool has_two = false;     // segment contains 2
    std::vector<u64> words;

    template <typename F>
    void for_each(F&& f) const
    {
        if (has_two) {
            f(u64{2});
        }
        for (std::size_t w = 0; w < words.size(); ++w) {
            u64 bits = words[w];
            while (bits) {
                auto b = static_cast<u64>(std::countr_zero(bits));
                f(first_odd + 2 * (64 * w + b));
                bits &= bits - 1;
            }
        }
    }

    /// Primes in the segment strictly below x.
    u64 count_below(u64 x) const
    {
        u64 c = (has_two && x > 2) ? 1 : 0;
        if (x <= first_odd) {
            return c;
        }
        u64 n = std::min<u64>((x - first_odd + 1) / 2, nbits);
        std::size_t full = static_cast<std::size_t>(n / 64);
        for (std::size_t w = 0; w < full; ++w) {
            c += static_cast<u64>(std::popcount(words[w]));
        }
        if (auto rem = n % 64) {
            c += static_cast<u64>(std::popcount(words[full] & ((u64{1} << rem) - 1)));
        }
        return c;
    }

    u64 count() const
    {
        u64 c = has_two ? 1 : 0;
        for (u64 w : words) {
            c += static_cast<u64>(std::popcount(w));
        }
        return c;
    }
};

// Sieve [seg.lo, seg.hi) with odd base primes whose squares may fall inside.
inline void sieve_segment(const Segment& seg, std::span<const std::uint32_t> base, SieveBits& out)
{
    out.has_two = seg.lo <= 2 && 2 < seg.hi;
    out.first_odd = seg.lo | 1;
    out.nbits = out.first_odd < seg.hi ? static_cast<std::size_t>((seg.hi - out.first_odd + 1) / 2) : 0;
    out.words.assign((out.nbits + 63) / 64, ~u64{0});
    if (out.nbits == 0) {
        return;
    }
    if (auto rem = out.nbits % 64) {
        out.words.back() = (u64{1} << rem) - 1;
    }
    if (out.first_odd == 1) {
        out.words[0] &= ~u64{1};
    }
    const u128 lo = out.first_odd;
    const u128 hi = seg.hi;
    u64* words = out.words.data();
    for (std::uint32_t p32 : base) {
        const u128 p = p32;
        if (p * p >= hi) {
            break;
        }
        u128 start = std::max(p * p, (lo + p - 1) / p * p);
        if ((start & 1) == 0) {
            start += p;
        }
        if (start >= hi) {
            continue;
        }
        auto i = static_cast<std::size_t>((start - lo) / 2);
        const std::size_t n = out.nbits;
        const std::size_t step = p32;
        for (; i < n; i += step) {
            words[i >> 6] &= ~(u64{1} << (i & 63));
        }
    }
}

inline std::vector<Segment> tile(u64 lo, u64 hi, std::size_t seg_len)
{
    std::vector<Segment> segs;
    const u64 span = 2 * static_cast<u64>(seg_len);
    std::size_t idx = 0;
    for (u64 a = lo; a < hi; ++idx) {
        u64 b = (hi - a > span) ? a + span : hi;
        segs.push_back({a, b, idx});
        a = b;
    }
    return segs;
}

// Narrow windows far out (e.g. near 1.4e18) are cheaper to test candidate by candidate
// than to build base primes up to sqrt(hi).
inline bool prefer_candidate_testing(u64 lo, u64 hi)
{
    u64 root = isqrt(hi - 1);
    return root >= small_table_limit && (hi - lo) / 16 < root;
}

/// Drives the sieve across [lo, hi) and calls visit(const Segment&, const SieveBits&)
/// once per segment, in ordinal order.
template <typename Visit>
void sieve_range(u64 lo, u64 hi, const SieveOptions& opt, Visit&& visit)
{
    if (lo >= hi) {
        return;
    }
    const std::size_t seg_len = rounded_segment_length(opt);
    if (!opt.auto_split && (hi - lo) > 2 * static_cast<u64>(seg_len)) {
        throw RangeTooLarge("range [" + std::to_string(lo) + ", " + std::to_string(hi) +
                            ") exceeds one segment and auto-splitting is disabled");
    }
    const auto base = odd_base_primes(isqrt(hi - 1));
    const auto segs = tile(lo, hi, seg_len);
    if (opt.threads <= 1 || segs.size() == 1) {
        SieveBits bits;
        for (const auto& s : segs) {
            sieve_segment(s, base, bits);
            visit(s, bits);
        }
        return;
    }
    const std::span<const std::uint32_t> shared{base};
    for (std::size_t first = 0; first < segs.size(); first += opt.threads) {
        const std::size_t last = std::min(segs.size(), first + opt.threads);
        std::vector<std::future<SieveBits>> batch;
        batch.reserve(last - first);
        for (std::size_t k = first; k < last; ++k) {
            batch.push_back(std::async(std::launch::async, [&segs, shared, k] {
                SieveBits b;
                sieve_segment(segs[k], shared, b);
                return b;
            }));
        }
        for (std::size_t k = first; k < last; ++k) {
            visit(segs[k], batch[k - first].get());
        }
    }
}

} // namespace detail

/// Exact primality for every 64-bit input.
inline bool is_prime(u64 n)
{
    if (n < detail::small_table_limit) {
        if (n < 2) {
            return false;
        }
        return n == 2 || ((n & 1) && detail::small_table()[n / 2]);
    }
    return detail::miller_rabin(n);
}

/// Calls f(p) for every prime lo <= p < hi in ascending order.
template <typename F>
void for_each_prime(u64 lo, u64 hi, F&& f, const SieveOptions& opt = {})
{
    if (lo >= hi) {
        return;
    }
    if (detail::prefer_candidate_testing(lo, hi)) {
        detail::rounded_segment_length(opt);
        if (lo <= 2 && 2 < hi) {
            f(u64{2});
        }
        for (u64 n = std::max<u64>(lo | 1, 3); n < hi; n += 2) {
            if (detail::miller_rabin(n)) {
                f(n);
            }
            if (n >= hi - 2) {
                break;
            }
        }
        return;
    }
    detail::sieve_range(lo, hi, opt, [&](const Segment&, const detail::SieveBits& bits) { bits.for_each(f); });
}

/// Primes p with lo <= p < hi, ascending.
inline std::vector<u64> primes_in_range(u64 lo, u64 hi, const SieveOptions& opt = {})
{
    std::vector<u64> out;
    for_each_prime(lo, hi, [&](u64 p) { out.push_back(p); }, opt);
    return out;
}

/// pi(x): the number of primes strictly below x.
///
/// The strict inequality is deliberate: pi(113) = 29 and pi(114) = 30.
inline u64 prime_count(u64 x, const SieveOptions& opt = {})
{
    u64 total = 0;
    detail::sieve_range(0, x, opt, [&](const Segment&, const detail::SieveBits& bits) { total += bits.count(); });
    return total;
}

/// pi(x) for each x in an ascending list, from a single sweep up to the largest x.
inline std::vector<u64> prime_counts_at(std::span<const u64> xs, const SieveOptions& opt = {})
{
    if (!std::is_sorted(xs.begin(), xs.end())) {
        throw std::invalid_argument("prime_counts_at expects ascending arguments");
    }
    std::vector<u64> out(xs.size(), 0);
    if (xs.empty()) {
        return out;
    }
    std::size_t next = 0;
    u64 before = 0; // primes in all earlier segments
    detail::sieve_range(0, xs.back(), opt, [&](const Segment& s, const detail::SieveBits& bits) {
        while (next < xs.size() && xs[next] <= s.hi) {
            out[next] = before + bits.count_below(xs[next]);
            ++next;
        }
        before += bits.count();
    });
    for (; next < xs.size(); ++next) {
        out[next] = before;
    }
    return out;
}

} // namespace andrica
