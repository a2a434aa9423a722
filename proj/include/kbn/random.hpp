#ifndef KBN_RANDOM_HPP
#define KBN_RANDOM_HPP

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace kbn {

/// Seeded generator used everywhere randomness is needed.
///
/// The engine is std::mt19937_64. Distributions are mapped by hand rather
/// than through <random>'s distribution templates, whose output is
/// implementation-defined, so a given seed produces the same stream with
/// every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : m_engine(seed) {}

    std::uint64_t next() { return m_engine(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform() { return static_cast<double>(m_engine() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, bound), rejection-sampled to avoid modulo bias.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
        std::uint64_t x;
        do {
            x = m_engine();
        } while (x >= limit);
        return x % bound;
    }

    bool coin() { return (m_engine() >> 63) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            std::swap(values[i - 1], values[below(i)]);
        }
    }

private:
    std::mt19937_64 m_engine;
};

}  // namespace kbn

#endif  // KBN_RANDOM_HPP
