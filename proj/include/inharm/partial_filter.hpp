#pragma once

#include <string_view>
#include <vector>

#include "inharm/audio_io.hpp"

namespace inharm {

struct FilterTarget {
  double center_hz = 0.0;
  double gain_db = 0.0;
};

struct FilterSpec {
  std::vector<FilterTarget> targets;
  double bandwidth_cents = 50.0;  // full width at half maximum of the dB gain curve

  // Centres positive, gains finite, bandwidth in [5, 200]. Throws std::invalid_argument.
  void validate() const;
};

/// Parses "<hz>:<db>", e.g. "363.4:-40".
FilterTarget parse_filter_target(std::string_view text);

/// Gain in dB at `hz`: each target contributes gain * exp(-x^2 / 2 sigma^2)
/// with x in cents; overlapping targets combine by largest magnitude.
double filter_gain_db(const FilterSpec& spec, double hz);

/// STFT filtering with a Hann window of frame.window_size and hop
/// window / 4. Each bin takes the gain of its spectral peak's frequency, where
/// bins belong to the nearest dominant peak (bounded by the magnitude minimum
/// between neighbouring peaks), so a partial's main lobe and sidelobes move
/// together. Output has the input's length. Throws std::invalid_argument for
/// targets at or above Nyquist.
AudioBuffer apply_partial_filter(const AudioBuffer& buffer, const FilterSpec& spec, const FrameSpec& frame = {});

}  // namespace inharm
