#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace inharm {

/// Equal-loudness contour: SPL (dB) required across frequency for a fixed
/// loudness level, interpolated linearly in (log f, dB).
class LoudnessContour {
 public:
  /// Anchors must be strictly increasing in frequency and span 20 Hz to 12.5 kHz.
  LoudnessContour(std::vector<double> hz, std::vector<double> spl_db, double phon_level);

  /// ISO 226 tabulated parameters evaluated at `phon` (0..90); the 1 kHz
  /// anchor equals `phon` exactly.
  static LoudnessContour iso226(double phon = 50.0);

  /// CSV of `hz,db` rows (optional header, '#' comments). The loudness level
  /// is taken from the contour value at 1 kHz.
  static LoudnessContour from_csv(const std::filesystem::path& path);

  double phon_level() const { return phon_; }
  std::span<const double> anchor_hz() const { return hz_; }
  std::span<const double> anchor_spl() const { return spl_; }

  /// SPL for equal loudness at `hz`; clamps outside the anchor range.
  double spl(double hz) const;

  /// Power weight 10^((phon - spl(hz)) / 10); exactly 1 at 1 kHz.
  double weight(double hz) const;

 private:
  std::vector<double> hz_;
  std::vector<double> log_hz_;
  std::vector<double> spl_;
  double phon_;
};

inline double contour_spl(const LoudnessContour& contour, double hz) { return contour.spl(hz); }

/// Multiplies each power by the contour weight at its frequency. Powers must be nonnegative.
Eigen::ArrayXd weight_power_spectrum(const Eigen::ArrayXd& hz, const Eigen::ArrayXd& power,
                                     const LoudnessContour& contour);

}  // namespace inharm
