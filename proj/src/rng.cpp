#include "exittime/rng.hpp"

#include <cmath>

namespace exittime {
namespace {

constexpr std::uint64_t mult0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t mult1 = 0xCA5A826395121157ull;
constexpr std::uint64_t weyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t weyl1 = 0xBB67AE8584CAA73Bull;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo)
{
    __uint128_t const p = static_cast<__uint128_t>(a) * b;
    hi = static_cast<std::uint64_t>(p >> 64);
    lo = static_cast<std::uint64_t>(p);
}

}  // namespace

Philox4x64::Counter Philox4x64::apply(Counter ctr, Key key)
{
    for (int round = 0; round < 10; ++round)
    {
        std::uint64_t hi0, lo0, hi1, lo1;
        mulhilo(mult0, ctr[0], hi0, lo0);
        mulhilo(mult1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += weyl0;
        key[1] += weyl1;
    }
    return ctr;
}

PathStream::PathStream(std::uint64_t seed, std::uint64_t path)
    : key_{seed, 0}, path_(path)
{
}

std::uint64_t PathStream::next_u64()
{
    if (used_ == 4)
    {
        buffer_ = Philox4x64::apply({block_++, path_, 0, 0}, key_);
        used_ = 0;
    }
    return buffer_[used_++];
}

double PathStream::uniform()
{
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

std::pair<double, double> PathStream::normal_pair()
{
    double u, v, s;
    do
    {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    double const f = std::sqrt(-2.0 * std::log(s) / s);
    return {u * f, v * f};
}

double PathStream::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    auto [a, b] = normal_pair();
    spare_ = b;
    has_spare_ = true;
    return a;
}

}  // namespace exittime
