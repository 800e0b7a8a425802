// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace oral {

/// Seeded pseudo-random source whose output is identical across platforms:
/// std::mt19937_64 is fully specified, and the distributions below are
/// written out instead of using the implementation-defined std ones.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0)
        : seed_(seed)
        , engine_(splitmix(seed))
    { }

    [[nodiscard]] std::uint64_t seed() const { return seed_; }

    /// Independent stream derived from this stream's seed and a name.
    [[nodiscard]] Rng substream(std::string_view name) const { return Rng(splitmix(seed_ ^ fnv1a(name))); }
    [[nodiscard]] Rng substream(std::string_view name, std::uint64_t index) const
    {
        return Rng(splitmix(seed_ ^ fnv1a(name)) ^ splitmix(index + 0x632be59bd9b4e019ULL));
    }

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        if (span == 0) return static_cast<std::int64_t>(next());
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % span);
        std::uint64_t x;
        do x = next();
        while (x >= limit);
        return lo + static_cast<std::int64_t>(x % span);
    }
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform_int(0, static_cast<std::int64_t>(n) - 1)); }

    /// Uniform real in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    bool bernoulli(double p) { return uniform() < p; }

    double normal(double mean, double stddev)
    {
        double u1;
        do u1 = uniform();
        while (u1 <= 0.0);
        const double u2 = uniform();
        return mean + stddev * std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
    }

    /// Rank in [1, n] with P(k) proportional to 1 / k^s.
    std::size_t zipf(std::size_t n, double s)
    {
        double total = 0;
        for (std::size_t k = 1; k <= n; ++k) total += 1.0 / std::pow(static_cast<double>(k), s);
        double x = uniform() * total;
        for (std::size_t k = 1; k <= n; ++k) {
            x -= 1.0 / std::pow(static_cast<double>(k), s);
            if (x < 0) return k;
        }
        return n;
    }

    /// Index drawn with probability proportional to weights[i].
    std::size_t weighted(const std::vector<double>& weights)
    {
        double total = 0;
        for (double w : weights) total += w;
        double x = uniform() * total;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            x -= weights[i];
            if (x < 0) return i;
        }
        return weights.size() - 1;
    }

    template <typename T>
    const T& pick(const std::vector<T>& v) { return v[index(v.size())]; }

    template <typename T>
    void shuffle(std::vector<T>& v)
    {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
    }

    /// k distinct indices from [0, n), in random order.
    std::vector<std::size_t> sample(std::size_t n, std::size_t k)
    {
        std::vector<std::size_t> all(n);
        for (std::size_t i = 0; i < n; ++i) all[i] = i;
        if (k > n) k = n;
        for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + index(n - i)]);
        all.resize(k);
        return all;
    }

    static std::uint64_t splitmix(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }
    static std::uint64_t fnv1a(std::string_view s)
    {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char c : s) h = (h ^ c) * 0x100000001b3ULL;
        return h;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace oral
