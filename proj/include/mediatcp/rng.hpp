/**
 * Copyright 2026 The MediaTCP Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef MEDIATCP_RNG_HPP_
#define MEDIATCP_RNG_HPP_

#include <cstdint>
#include <random>

namespace mediatcp {

// splitmix64 step; used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t &state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 stream with hand-rolled draws: the std distributions are not
// guaranteed to produce the same values across standard libraries.
class Stream {
 public:
  Stream() = default;
  explicit Stream(std::uint64_t seed) : engine_(seed) {}

  // Seed of substream `index` under `root`.
  static std::uint64_t derive(std::uint64_t root, std::uint64_t index) {
    std::uint64_t s = root ^ (0xd1b54a32d192ed03ULL * (index + 1));
    splitmix64(s);
    return splitmix64(s);
  }

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  bool bernoulli(double p) { return uniform() < p; }
  int binomial(int n, double p) {
    int hits = 0;
    for (int i = 0; i < n; ++i) hits += bernoulli(p) ? 1 : 0;
    return hits;
  }

 private:
  std::mt19937_64 engine_{0};
};

}  // namespace mediatcp

#endif  // MEDIATCP_RNG_HPP_
