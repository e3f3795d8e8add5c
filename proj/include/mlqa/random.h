#ifndef MLQA_RANDOM_H_
#define MLQA_RANDOM_H_

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace mlqa {

// Seeded generator whose derived draws are identical on every platform.
// std::mt19937_64's raw sequence is fixed by the standard, but the
// std::*_distribution adaptors and std::shuffle are not, so the bounded
// draws here are done by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % bound;
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace mlqa

#endif  // MLQA_RANDOM_H_
