#pragma once

#include <cmath>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "inharm/spectral.hpp"

namespace inharm {

// ---------------------------------------------------------------------------
// Consecutive-partial differences

struct DiffStats {
  Eigen::ArrayXd diffs;    // f[i+1] - f[i]
  Eigen::ArrayXd weights;  // power[i] + power[i+1]
  double weighted_median = 0.0;
  double weighted_mean = 0.0;
  double mad_cents = 0.0;  // median |cents(diff / weighted_median)|
  bool first_diff_outlier = false;
  double first_diff_outlier_cents = 0.0;  // cents(diffs[0]) - cents(median of diffs[1..])
};

DiffStats diff_stats(const PartialFrame& frame, double outlier_cents = 40.0);

/// Weighted median / mean over diffs[1..] (differences between overtones).
struct OvertoneDiffs {
  double median = 0.0;
  double mean = 0.0;
};
OvertoneDiffs overtone_diffs(const PartialFrame& frame);

// ---------------------------------------------------------------------------
// Least-deviating harmonic series

struct F0Estimate {
  double f0 = 0.0;
  double deviation_cents = 0.0;  // power-weighted RMS distance to the nearest harmonic
};

F0Estimate estimate_f0_least_deviating(const PartialFrame& frame);

// ---------------------------------------------------------------------------
// Regular grid f_n = n * d + s

struct GridFitOptions {
  int refit_passes = 2;
  double trim_floor_cents = 10.0;  // residuals below this are never trimmed
  double trim_scale = 3.0;         // trim beyond trim_scale * 1.4826 * MAD
  bool one_per_index = false;      // keep only the closest peak per harmonic index
};

struct GridFit {
  GridModel grid;
  std::vector<int> indices;    // per input frequency
  std::vector<bool> inlier;    // used in the final least-squares pass
  Eigen::ArrayXd residual_cents;
  double rms_cents = 0.0;         // over every input frequency
  double inlier_rms_cents = 0.0;  // over inliers only
};

/// Nearest-integer harmonic indices from `seed_spacing` (offset seeded by the
/// power-weighted circular mean of f mod d), then least-squares refits with
/// robust trimming. Needs at least two distinct frequencies.
GridFit fit_regular_grid(std::span<const double> freqs, std::span<const double> weights, double seed_spacing,
                         const GridFitOptions& options = {});

struct ShiftEstimate {
  double d = 0.0;             // spacing, Hz
  double s = 0.0;             // shift in [0, d)
  std::vector<int> indices;   // f_k ~ indices[k] * d + s
  double rms_cents = 0.0;
};

/// Spacing and shift of a regular layout. The seed defaults to the weighted
/// median of consecutive differences. Throws AnalysisError for fewer than
/// three partials or when the inlier RMS exceeds `fail_cents`.
ShiftEstimate estimate_shift(const PartialFrame& frame, std::optional<double> seed_spacing = std::nullopt,
                             double fail_cents = 50.0);

Eigen::ArrayXd reconstruct(const ShiftEstimate& shift);

// ---------------------------------------------------------------------------
// Typology

enum class ToneKind { Harmonic, Type1ShiftedResidue, Type2Regular, Type3NoisyHarmonic, Unclassified };
enum class Regularity { None, Stretched, Compressed };

std::string_view to_string(ToneKind kind);
std::string_view to_string(Regularity regularity);
ToneKind parse_tone_kind(std::string_view name);

struct Thresholds {
  double tight_cents = 20.0;
  double outlier_cents = 40.0;
  double jitter_cents = 8.0;
  double noisy_max_cents = 60.0;
  double loose_cents = 45.0;

  /// Sets a key by name; throws std::invalid_argument for unknown keys or bad values.
  void set(std::string_view key, double value);
  void validate() const;
};

/// `key = value` lines, '#' comments. Unknown keys are rejected.
Thresholds load_thresholds(const std::filesystem::path& path);
void apply_config_line(Thresholds& thresholds, std::string_view line);

struct ToneClassification {
  ToneKind kind = ToneKind::Unclassified;
  Regularity regularity = Regularity::None;
  double spacing_d = 0.0;   // Hz
  double shift_s = 0.0;     // type 1: f2 - 2c (signed); type 2: shift in [0, d)
  double jitter_cents = 0.0;
  bool octave_adjusted = false;
};

/// Decision order: harmonic, type 1, type 2, type 3, otherwise unclassified.
/// Needs at least four partials.
ToneClassification classify_tone(const PartialFrame& frame, const Thresholds& thresholds = {});

/// Dispersion of the partials about their least-squares regular grid:
/// sqrt(3) * RMS cents, i.e. the half-width of a uniform jitter.
double grid_jitter_cents(const PartialFrame& frame);

// ---------------------------------------------------------------------------
// Stiff-string inharmonicity f_n = n f0 sqrt(1 + B n^2)

inline double piano_partial(int n, double f0, double B) { return n * f0 * std::sqrt(1.0 + B * n * n); }

/// d_n = f_{n+1} - f_n.
double piano_difference_model(int n, double f0, double B);

struct InharmonicityFit {
  double B = 0.0;
  double f0 = 0.0;
  double residual_rms = 0.0;  // Hz, over the fitted differences
  std::vector<int> indices;   // harmonic number assigned to each partial
};

/// Least squares over consecutive differences; f0 is solved in closed form
/// for each B, B by grid plus golden-section search. Needs six partials.
InharmonicityFit fit_inharmonicity_coefficient(const PartialFrame& frame, double max_residual_fraction = 0.05);

}  // namespace inharm
