#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "inharm/audio_io.hpp"

namespace inharm {

// Frequency layouts. The first field of ToneSpec (f0) is the fundamental or
// lowest partial, except for RegularGrid where d and s fully define it.
struct Harmonic {};
struct ShiftedResidue {
  double delta_hz = 0.0;  // added to every overtone (n >= 2)
};
struct RegularGrid {
  double d_hz = 0.0;
  double s_hz = 0.0;  // f_n = n * d + s, n >= 1
};
struct NoisyHarmonic {
  double jitter_cents = 0.0;  // uniform in [-jitter, +jitter]
  std::uint64_t seed = 0;
};
struct Piano {
  double B = 0.0;
};
struct SweepMember {
  double g_hz = 0.0;  // overtones at n * g, fundamental fixed
};

using ToneModel = std::variant<Harmonic, ShiftedResidue, RegularGrid, NoisyHarmonic, Piano, SweepMember>;

struct AmplitudeProfile {
  enum class Kind { Equal, Reciprocal, Power, Custom };
  Kind kind = Kind::Equal;
  double exponent = 1.0;       // Power: a_n = n^-exponent
  std::vector<double> custom;  // Custom: one entry per kept partial
  double at(int harmonic, std::size_t position) const;
};

struct ToneSpec {
  ToneModel model = Harmonic{};
  double f0 = 220.0;
  int n_partials = 10;  // counts kept partials (after odd_only)
  AmplitudeProfile amplitudes;
  bool odd_only = false;
  double duration_s = 1.0;
  double level = 0.5;       // peak amplitude after normalisation
  std::uint64_t phase_seed = 1;

  // Throws std::invalid_argument.
  void validate() const;
};

struct PartialSpec {
  int n = 0;  // harmonic number
  double hz = 0.0;
  double amplitude = 0.0;
};

std::string model_name(const ToneModel& model);

/// Frequencies and amplitudes of every partial, lowest first. Throws
/// std::invalid_argument naming the harmonic numbers at or above Nyquist
/// when a sample rate is given.
std::vector<PartialSpec> partial_table(const ToneSpec& spec, int sample_rate = 0);

/// Sum of sinusoids with seeded random phases, 10 ms raised-cosine fades,
/// peak-normalised to spec.level.
AudioBuffer render(const ToneSpec& spec, int sample_rate);

/// g linearly spaced from 220 to 246.94 Hz. Members share a 220 Hz fundamental.
std::vector<std::pair<double, ToneSpec>> sweep_set(int n_steps, int n_partials, const ToneSpec& base = {});

inline constexpr double kSweepLow = 220.0;
inline constexpr double kSweepHigh = 246.94;

std::string tone_spec_to_json(const ToneSpec& spec);
ToneSpec tone_spec_from_json(const std::string& text);
ToneSpec load_tone_spec(const std::filesystem::path& path);

}  // namespace inharm
