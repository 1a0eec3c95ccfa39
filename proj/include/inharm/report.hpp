#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "inharm/audio_io.hpp"
#include "inharm/metrics.hpp"
#include "inharm/spectral.hpp"

namespace inharm {

inline constexpr const char* kToolVersion = "1.0.0";

struct AnalysisSettings {
  FrameSpec frame;
  bool weighting = true;
  double phon = 50.0;
  std::string contour_csv;  // empty: built-in contour at `phon`
  TrackingConfig tracking;
  Thresholds thresholds;
};

struct FrameRecord {
  double time_s = 0.0;
  std::vector<Partial> partials;
  bool anchored = false;
  double diff_median_hz = 0.0;
  double diff_median_midi = 0.0;
  double diff_mad_cents = 0.0;
  double f0_least_dev_hz = 0.0;
  std::optional<ToneClassification> classification;  // needs four partials
};

struct DistributionPeak {
  double midi = 0.0;  // fractional MIDI number of the smoothed histogram maximum
  int note = 0;
  double cents = 0.0;  // from `note`
  std::string name;    // e.g. "A1"
};

struct ReportSummary {
  std::size_t frames_total = 0;
  std::size_t frames_analyzed = 0;  // equals the record count
  bool no_tonal_content = true;
  std::optional<std::string> modal_classification;
  std::optional<double> median_diff_median_hz;
  std::optional<DistributionPeak> distribution_peak;
};

struct AnalysisReport {
  std::string input;
  int sample_rate = 0;
  double duration_s = 0.0;
  AnalysisSettings settings;
  std::vector<FrameRecord> records;
  ReportSummary summary;
};

/// Name of an integer MIDI note, "C-1" .. "G9".
std::string note_name(int midi);

/// Peak of the 1-cent histogram of values (MIDI numbers) after Gaussian
/// smoothing with sigma = 5 cents. Empty input gives nullopt.
std::optional<DistributionPeak> distribution_peak(const std::vector<double>& midi_values);

/// Tracking, metrics and classification for every reliable frame.
AnalysisReport analyze_buffer(const AudioBuffer& audio, const AnalysisSettings& settings, std::string input_name = {});

/// Uses only the records and the total frame count.
ReportSummary summarize(const std::vector<FrameRecord>& records, std::size_t frames_total);

std::string report_to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const std::string& text);

/// One row per partial: time_s,freq_hz,midi,cents_dev,power.
std::string report_partials_csv(const AnalysisReport& report);

}  // namespace inharm
