#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "inharm/audio_io.hpp"
#include "inharm/loudness.hpp"

namespace inharm {

/// One STFT frame as a power spectrum over bins 0..N/2. Power is scaled so a
/// stationary sinusoid of amplitude A centred on a bin reads A^2.
struct Spectrum {
  double frame_time = 0.0;
  Eigen::ArrayXd freqs;
  Eigen::ArrayXd power;
  double resolution_hz = 0.0;  // sample_rate / window length; zero when unknown
  WindowKind window = WindowKind::Hann;
  Eigen::ArrayXd weight;  // per-bin loudness weight already applied to power; empty when unweighted

  double bin_hz() const { return freqs.size() > 1 ? freqs(1) - freqs(0) : 0.0; }
};

struct Partial {
  double freq = 0.0;   // Hz
  double power = 0.0;  // linear
  double midi = 0.0;
  double cents_dev = 0.0;  // from the nearest equal-tempered note

  static Partial at(double freq, double power);
};

/// Regular spacing model f_n = n * spacing + offset (offset is signed and
/// not reduced modulo the spacing).
struct GridModel {
  double spacing = 0.0;
  double offset = 0.0;

  double at(int n) const { return n * spacing + offset; }
};

struct PartialFrame {
  double time = 0.0;
  std::vector<Partial> partials;  // strictly increasing frequency
  std::size_t max_partials = 27;
  bool reliable = false;
  std::optional<GridModel> grid;  // set by track_partials when a grid was fitted
  bool anchored = false;          // lowest partial kept off-grid as the tone's first partial

  Eigen::ArrayXd freqs() const;
  Eigen::ArrayXd powers() const;
};

/// Builds a frame from raw (freq, power) pairs, sorting by frequency.
PartialFrame make_frame(std::vector<Partial> partials, double time = 0.0);

struct PeakConfig {
  double floor_db = 60.0;          // below the frame maximum
  std::size_t max_peaks = 27;
  double min_separation_cents = 25.0;
  // Peaks must also exceed the median bin power by this margin, which keeps
  // broadband noise maxima out without affecting clean spectra.
  double noise_margin_db = 15.0;
};

std::vector<Spectrum> stft(const AudioBuffer& buffer, const FrameSpec& spec,
                           const std::optional<LoudnessContour>& weighting = std::nullopt);

/// Bin-wise mean of equally sized spectra (time of the middle frame).
Spectrum average_spectrum(std::span<const Spectrum> spectra);

/// Local maxima above the floor that also dominate +-1.5 window bins and
/// stand 6 dB clear of the sidelobe leakage of stronger peaks, refined by a parabola through the dB values
/// of the peak bin and its neighbours. Returned sorted by frequency, keeping
/// the `max_peaks` most powerful.
std::vector<Partial> pick_peaks(const Spectrum& spectrum, const PeakConfig& config);
std::vector<Partial> pick_peaks(const Spectrum& spectrum, double floor_db, std::size_t max_peaks);

struct TrackingConfig {
  PeakConfig peaks{60.0, 128, 25.0, 15.0};
  std::size_t max_partials = 27;
  double tol_cents = 60.0;
  double max_delta_cents = 50.0;
};

/// Keeps, per frame, the peaks explained by a regular grid n*d + s (plus the
/// lowest partial when it sits one spacing below the grid's first member).
/// The grid is seeded by the previous frame and may change by at most
/// max_delta_cents per frame unless the previous grid stops explaining the
/// spectrum. Frames with fewer than three peaks are returned unreliable.
std::vector<PartialFrame> track_partials(std::span<const Spectrum> spectra, const TrackingConfig& config);

}  // namespace inharm
