#include "ssig/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "ssig/rng.hpp"
#include "ssig/siggen.hpp"

namespace ssig {

DistortionConfig DistortionConfig::from_level(DistortionLevel level,
                                              std::uint64_t seed) {
  DistortionConfig cfg;
  cfg.level = level;
  cfg.seed = seed;
  return cfg;
}

DistortionConfig DistortionConfig::custom(std::uint32_t op_count,
                                          double sigma_deg, double clip_deg,
                                          std::uint64_t seed) {
  DistortionConfig cfg;
  cfg.level = DistortionLevel::custom;
  cfg.op_count = op_count;
  cfg.angle_noise_sigma_deg = sigma_deg;
  cfg.angle_noise_clip_deg = clip_deg;
  cfg.seed = seed;
  return cfg;
}

std::uint32_t DistortionConfig::resolved_op_count() const {
  switch (level) {
    case DistortionLevel::none:
      return 0;
    case DistortionLevel::light:
      return 1;
    case DistortionLevel::medium:
      return 7;
    case DistortionLevel::strong:
      return 13;
    case DistortionLevel::custom:
      return op_count;
  }
  return 0;
}

void DistortionConfig::validate() const {
  if (!(angle_noise_sigma_deg >= 0.0) || !(angle_noise_clip_deg >= 0.0)) {
    throw_invalid("angle noise sigma and clip must be nonnegative");
  }
}

namespace {

struct Element {
  char symbol;
  double angle_deg;  // raw sweep angle in [0, 360)
};

double wrap360(double deg) {
  deg = std::fmod(deg, 360.0);
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg = 0.0;
  return deg;
}

}  // namespace

Signature distort(const Signature& sig, const DistortionConfig& cfg,
                  const Alphabet& alphabet, std::uint32_t quantization_levels) {
  cfg.validate();
  if (sig.types.size() != sig.angle_bins.size()) {
    throw_invalid("signature parts have different lengths");
  }
  const double step = 360.0 / static_cast<double>(quantization_levels);
  auto gen = rng::make_engine(cfg.seed);

  // Original elements enter at their bin-center angle, the least-biased
  // de-quantization; inserted ones carry their raw angle directly.
  std::vector<Element> elems;
  elems.reserve(sig.size());
  for (std::size_t i = 0; i < sig.size(); ++i) {
    if (sig.angle_bins[i] >= quantization_levels) {
      throw_invalid("angle bin exceeds quantization level count");
    }
    elems.push_back({sig.types[i],
                     (static_cast<double>(sig.angle_bins[i]) + 0.5) * step});
  }

  const std::size_t class_count = alphabet.size();
  for (std::uint32_t op = 0; op < cfg.resolved_op_count(); ++op) {
    switch (rng::uniform_below(gen, 3)) {
      case 0: {  // miss detection: drop one element
        if (elems.empty()) break;
        const std::size_t victim = rng::uniform_below(gen, elems.size());
        elems.erase(elems.begin() + static_cast<std::ptrdiff_t>(victim));
        break;
      }
      case 1: {  // false detection: introduce a new object
        const std::size_t cls = rng::uniform_below(gen, class_count);
        const double angle = rng::uniform01(gen) * 360.0;
        elems.push_back({alphabet.classes()[cls].symbol, angle});
        break;
      }
      case 2: {  // false classification: rewrite a class to a different one
        if (elems.empty()) break;
        const std::size_t victim = rng::uniform_below(gen, elems.size());
        const char current = elems[victim].symbol;
        if (class_count < 2) break;
        std::size_t pick = rng::uniform_below(gen, class_count - 1);
        for (std::size_t c = 0; c < class_count; ++c) {
          if (alphabet.classes()[c].symbol == current) continue;
          if (pick == 0) {
            elems[victim].symbol = alphabet.classes()[c].symbol;
            break;
          }
          --pick;
        }
        break;
      }
    }
  }

  if (cfg.angle_noise_enabled()) {
    for (auto& e : elems) {
      double noise = cfg.angle_noise_sigma_deg * rng::standard_normal(gen);
      noise = std::clamp(noise, -cfg.angle_noise_clip_deg,
                         cfg.angle_noise_clip_deg);
      e.angle_deg = wrap360(e.angle_deg + noise);
    }
  }

  // The query pipeline emits sweep-ordered signatures, so the distorted one
  // is re-sorted the same way. The sort is stable on equal angles, which
  // makes the zero-noise, zero-op configuration an exact identity.
  std::stable_sort(elems.begin(), elems.end(),
                   [](const Element& a, const Element& b) {
                     return a.angle_deg < b.angle_deg;
                   });

  Signature out;
  out.types.reserve(elems.size());
  out.angle_bins.reserve(elems.size());
  for (const auto& e : elems) {
    out.types += e.symbol;
    out.angle_bins.push_back(static_cast<std::uint8_t>(
        quantize_angle(e.angle_deg, quantization_levels)));
  }
  return out;
}

DistortionLevel distortion_level_from_name(std::string_view name) {
  if (name == "none") return DistortionLevel::none;
  if (name == "light") return DistortionLevel::light;
  if (name == "medium") return DistortionLevel::medium;
  if (name == "strong") return DistortionLevel::strong;
  if (name == "custom") return DistortionLevel::custom;
  throw_invalid("unknown distortion level '" + std::string(name) + "'");
}

const char* distortion_level_name(DistortionLevel level) {
  switch (level) {
    case DistortionLevel::none:
      return "none";
    case DistortionLevel::light:
      return "light";
    case DistortionLevel::medium:
      return "medium";
    case DistortionLevel::strong:
      return "strong";
    case DistortionLevel::custom:
      return "custom";
  }
  return "unknown";
}

}  // namespace ssig
