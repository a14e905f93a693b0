/*
 * Copyright (C) 2026 The isect Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#ifndef ISECT__RNG_HPP
#define ISECT__RNG_HPP

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>

namespace isect {

//==============================================================================
/// Deterministic random stream. Distribution helpers are written out here
/// instead of using <random> distributions so that draws are identical across
/// standard library implementations.
class Rng
{
public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed = 0)
  : _engine(seed)
  {}

  /// Derive an independent stream from a list of keys, e.g.
  /// (master seed, run index, vehicle id, purpose).
  static Rng keyed(std::initializer_list<std::uint64_t> keys)
  {
    std::uint64_t h = 0x243F6A8885A308D3ull;
    for (const auto k : keys)
      h = splitmix(h ^ splitmix(k + 0x9E3779B97F4A7C15ull));
    return Rng(h);
  }

  static constexpr std::uint64_t splitmix(std::uint64_t x)
  {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
  }

  std::uint64_t next() { return _engine(); }

  /// Uniform in [0, 1).
  double uniform01()
  {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi)
  {
    return lo + (hi - lo) * uniform01();
  }

  /// Uniform in the open interval (lo, hi).
  double uniform_open(double lo, double hi)
  {
    if (!(lo < hi))
      throw std::invalid_argument("Rng::uniform_open: empty interval");
    while (true)
    {
      const double u = (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
      const double x = lo + (hi - lo) * u;
      // Rounding can land on an endpoint; draw again.
      if (lo < x && x < hi)
        return x;
    }
  }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n)
  {
    if (n == 0)
      throw std::invalid_argument("Rng::below: empty range");

    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t r = next();
    while (r >= limit)
      r = next();
    return r % n;
  }

  bool bernoulli(double p)
  {
    return uniform01() < p;
  }

  template<typename RandomIt>
  void shuffle(RandomIt first, RandomIt last)
  {
    const auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i)
    {
      const auto j = below(i);
      std::iter_swap(first + (i - 1), first + j);
    }
  }

private:
  std::mt19937_64 _engine;
};

} // namespace isect

#endif // ISECT__RNG_HPP
