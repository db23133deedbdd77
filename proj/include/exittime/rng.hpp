#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace exittime {

//! Philox4x64-10 counter-based block cipher.
struct Philox4x64
{
    using Counter = std::array<std::uint64_t, 4>;
    using Key = std::array<std::uint64_t, 2>;

    static Counter apply(Counter ctr, Key key);
};

/*!
 * Random stream for one Monte Carlo path.
 *
 * Block i of the stream is Philox(counter = {i, path, 0, 0}, key = {seed, 0}),
 * so the draws depend only on (seed, path) and not on scheduling.
 */
class PathStream
{
  public:
    PathStream(std::uint64_t seed, std::uint64_t path);

    std::uint64_t next_u64();
    //! Uniform on the open interval (0, 1) with 53 random bits.
    double uniform();
    //! Pair of independent standard normals (Marsaglia polar method).
    std::pair<double, double> normal_pair();
    double normal();

  private:
    Philox4x64::Key key_;
    std::uint64_t path_;
    std::uint64_t block_ = 0;
    Philox4x64::Counter buffer_{};
    int used_ = 4;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

//! Stream for path `path_index` of a run seeded with `seed`.
inline PathStream path_rng(std::uint64_t seed, std::uint64_t path_index)
{
    return PathStream(seed, path_index);
}

}  // namespace exittime
