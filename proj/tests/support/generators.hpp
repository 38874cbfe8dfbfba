#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

#include "ssig/model.hpp"
#include "ssig/rng.hpp"

// Seeded random inputs for the property suites. Each case derives its own
// engine from (suite seed, case index) so failures replay exactly.
namespace testgen {

inline constexpr int kCases = 200;

template <typename Fn>
void for_each_case(std::uint64_t suite_seed, Fn&& fn, int cases = kCases) {
  for (int c = 0; c < cases; ++c) {
    auto gen = ssig::rng::make_engine(ssig::rng::mix_seed(suite_seed, c));
    fn(gen, c);
  }
}

inline std::string random_symbols(std::mt19937_64& gen, std::size_t max_len,
                                  std::string_view alphabet = "BDG") {
  const std::size_t len = ssig::rng::uniform_below(gen, max_len + 1);
  std::string out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    out += alphabet[ssig::rng::uniform_below(gen, alphabet.size())];
  }
  return out;
}

// A structurally valid, sweep-ordered signature over the default alphabet.
inline ssig::Signature random_signature(std::mt19937_64& gen,
                                        std::size_t max_len, std::uint32_t q) {
  const auto& alphabet = ssig::alphabet_default();
  const std::size_t len = ssig::rng::uniform_below(gen, max_len + 1);
  std::vector<std::uint8_t> bins;
  bins.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    bins.push_back(static_cast<std::uint8_t>(ssig::rng::uniform_below(gen, q)));
  }
  std::sort(bins.begin(), bins.end());
  ssig::Signature sig;
  sig.angle_bins = std::move(bins);
  sig.types.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    sig.types +=
        alphabet.classes()[ssig::rng::uniform_below(gen, alphabet.size())]
            .symbol;
  }
  return sig;
}

}  // namespace testgen
