#pragma once

#include <cstdint>

#include "ssig/model.hpp"

namespace ssig {

enum class DistortionLevel { none, light, medium, strong, custom };

// Simulated detector errors applied to query signatures: a number of
// type-level operations (miss detection, false detection, false
// classification) followed by Gaussian angle noise on every element.
struct DistortionConfig {
  DistortionLevel level = DistortionLevel::none;
  std::uint32_t op_count = 0;  // used when level == custom
  double angle_noise_sigma_deg = 5.0;
  double angle_noise_clip_deg = 30.0;
  std::uint64_t seed = 0;

  static DistortionConfig from_level(DistortionLevel level,
                                     std::uint64_t seed = 0);
  static DistortionConfig custom(std::uint32_t op_count, double sigma_deg,
                                 double clip_deg, std::uint64_t seed = 0);

  // light/medium/strong map to 1/7/13 operations.
  std::uint32_t resolved_op_count() const;
  // Angle noise applies at every level except none.
  bool angle_noise_enabled() const { return level != DistortionLevel::none; }
  void validate() const;
};

Signature distort(const Signature& sig, const DistortionConfig& cfg,
                  const Alphabet& alphabet, std::uint32_t quantization_levels);

DistortionLevel distortion_level_from_name(std::string_view name);
const char* distortion_level_name(DistortionLevel level);

}  // namespace ssig
