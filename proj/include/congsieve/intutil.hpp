// Shared integer helpers: primality, prime enumeration, exact rationals,
// and a bounded worker pool for independent batch tasks.
#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace congsieve {

inline int64_t mulmod64(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>(static_cast<__int128>(a) * b % m);
}

inline int64_t powmod64(int64_t base, uint64_t exp, int64_t m) {
    if (m == 1) return 0;
    int64_t r = 1;
    base %= m;
    if (base < 0) base += m;
    while (exp) {
        if (exp & 1) r = mulmod64(r, base, m);
        base = mulmod64(base, base, m);
        exp >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
inline bool is_prime64(int64_t n) {
    if (n < 2) return false;
    for (int64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    int64_t d = n - 1;
    int s = 0;
    while (d % 2 == 0) { d /= 2; ++s; }
    for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        int64_t x = powmod64(a, static_cast<uint64_t>(d), n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod64(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

inline std::vector<int64_t> primes_up_to(int64_t n) {
    std::vector<int64_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(static_cast<size_t>(n) + 1, false);
    for (int64_t i = 2; i <= n; ++i) {
        if (comp[static_cast<size_t>(i)]) continue;
        out.push_back(i);
        for (int64_t j = i * i; j <= n; j += i) comp[static_cast<size_t>(j)] = true;
    }
    return out;
}

inline int valuation(int64_t n, int64_t p) {
    if (n == 0) throw std::invalid_argument("valuation of zero");
    int v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

// num/den with den > 0 and gcd(num, den) = 1.
struct Rational {
    int64_t num = 0;
    int64_t den = 1;

    bool operator==(const Rational&) const = default;
};

inline Rational rat(int64_t num, int64_t den = 1) {
    if (den == 0) throw std::invalid_argument("zero denominator");
    if (den < 0) { num = -num; den = -den; }
    int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) { num /= g; den /= g; }
    return Rational{num, den};
}

inline Rational rat_add(const Rational& a, const Rational& b) {
    __int128 num = static_cast<__int128>(a.num) * b.den + static_cast<__int128>(b.num) * a.den;
    __int128 den = static_cast<__int128>(a.den) * b.den;
    __int128 g = den;
    __int128 x = num < 0 ? -num : num;
    while (x) { __int128 t = g % x; g = x; x = t; }
    if (g > 1) { num /= g; den /= g; }
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
        throw std::overflow_error("rational overflow");
    return Rational{static_cast<int64_t>(num), static_cast<int64_t>(den)};
}

inline Rational rat_mul(const Rational& a, const Rational& b) {
    Rational x = rat(a.num, b.den);
    Rational y = rat(b.num, a.den);
    __int128 num = static_cast<__int128>(x.num) * y.num;
    __int128 den = static_cast<__int128>(x.den) * y.den;
    if (num > INT64_MAX || num < INT64_MIN || den > INT64_MAX)
        throw std::overflow_error("rational overflow");
    return Rational{static_cast<int64_t>(num), static_cast<int64_t>(den)};
}

inline Rational rat_neg(const Rational& a) { return Rational{-a.num, a.den}; }

inline std::string rat_str(const Rational& a) {
    return std::to_string(a.num) + "/" + std::to_string(a.den);
}

// Runs fn(0..count-1) on up to `jobs` threads. Tasks must be independent;
// callers own any result ordering.
inline void parallel_for_tasks(int jobs, size_t count, const std::function<void(size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    size_t nthreads = std::min<size_t>(static_cast<size_t>(jobs), count);
    std::vector<std::exception_ptr> errors(nthreads);
    for (size_t t = 0; t < nthreads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (;;) {
                    size_t i = next.fetch_add(1);
                    if (i >= count) break;
                    fn(i);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace congsieve
