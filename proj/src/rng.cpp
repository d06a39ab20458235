#include "trustsim/rng.hpp"

#include <cmath>
#include <numbers>

namespace trustsim {

double RandomSource::normal() {
  // 1 - u keeps the log argument in (0, 1].
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t RngStream::substream_seed(std::uint64_t seed, std::string_view name) {
  return splitmix64(seed ^ fnv1a64(name));
}

RngStream::RngStream(std::uint64_t seed)
    : seed_(seed),
      env_(substream_seed(seed, "env")),
      policy_(substream_seed(seed, "policy")),
      tasks_(substream_seed(seed, "tasks")),
      noise_(substream_seed(seed, "noise")) {}

}  // namespace trustsim
