#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "inharm/audio_io.hpp"
#include "inharm/spectral.hpp"
#include "inharm/synth.hpp"

namespace inharm {

/// Highest peak of the normalised autocorrelation over lags
/// [sample_rate / fmax, sample_rate / fmin], excluding lag zero. Peaks that
/// tie within 1e-3 of the maximum resolve to the shortest lag. The lag is
/// refined by a parabola and then on the continuous autocorrelation.
/// Throws AnalysisError when the buffer is shorter than 2 / fmin or no
/// positive peak exists in range.
double autocorr_pitch(const AudioBuffer& buffer, double fmin = 60.0, double fmax = 500.0);

struct SweepRow {
  double g_hz = 0.0;
  double f0_partial_hz = 0.0;  // lowest detected partial
  double autocorr_hz = 0.0;
  double diff_median_hz = 0.0;  // overtone differences
  double diff_mean_hz = 0.0;
  double first_pair_diff_hz = 0.0;
  bool valid = true;
  std::string error;
};

struct SweepConfig {
  int n_steps = 21;
  int n_partials = 21;  // fundamental plus 20 overtones
  AmplitudeProfile amplitudes{AmplitudeProfile::Kind::Power, 1.5, {}};
  double duration_s = 1.0;
  double level = 0.5;
  std::uint64_t phase_seed = 1;
  int sample_rate = 44100;
  double fmin = 60.0;
  double fmax = 500.0;
  FrameSpec frame;
  PeakConfig peaks{100.0, 128, 25.0, 15.0};
};

/// Estimators for one rendered sweep member, measured on its middle frame.
/// Analysis failures mark the row invalid instead of throwing.
SweepRow analyze_sweep_member(double g_hz, const AudioBuffer& audio, const SweepConfig& config);

std::vector<SweepRow> run_sweep_experiment(const SweepConfig& config = {});

inline constexpr std::string_view kSweepCsvHeader =
    "g_hz,f0_partial_hz,autocorr_hz,diff_median_hz,diff_mean_hz,first_pair_diff_hz";

/// Invalid rows carry "nan" in every estimator column.
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::vector<SweepRow> parse_sweep_csv(const std::string& text);

}  // namespace inharm
