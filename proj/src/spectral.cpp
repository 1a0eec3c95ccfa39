#include "inharm/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <complex>
#include <limits>
#include <map>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "inharm/metrics.hpp"
#include "inharm/stats.hpp"
#include "inharm/units.hpp"

namespace inharm {

Partial Partial::at(double freq, double power) {
  Partial p;
  p.freq = freq;
  p.power = power;
  p.midi = hz_to_midi(freq);
  p.cents_dev = cents_from_nearest_note(p.midi);
  return p;
}

Eigen::ArrayXd PartialFrame::freqs() const {
  Eigen::ArrayXd out(Eigen::Index(partials.size()));
  for (std::size_t i = 0; i < partials.size(); ++i) out(Eigen::Index(i)) = partials[i].freq;
  return out;
}

Eigen::ArrayXd PartialFrame::powers() const {
  Eigen::ArrayXd out(Eigen::Index(partials.size()));
  for (std::size_t i = 0; i < partials.size(); ++i) out(Eigen::Index(i)) = partials[i].power;
  return out;
}

PartialFrame make_frame(std::vector<Partial> partials, double time) {
  std::sort(partials.begin(), partials.end(), [](const Partial& a, const Partial& b) { return a.freq < b.freq; });
  PartialFrame frame;
  frame.time = time;
  frame.partials = std::move(partials);
  frame.max_partials = std::max<std::size_t>(frame.max_partials, frame.partials.size());
  frame.reliable = frame.partials.size() >= 3;
  return frame;
}

std::vector<Spectrum> stft(const AudioBuffer& buffer, const FrameSpec& spec,
                           const std::optional<LoudnessContour>& weighting) {
  const std::vector<Frame> blocks = frames(buffer, spec);
  const Eigen::ArrayXd window = make_window(spec.window_kind, spec.window_size);
  const double amplitude_norm = window.sum() / 2.0;
  const int fft_size = spec.window_size * spec.zero_pad;
  const Eigen::Index bins = fft_size / 2 + 1;
  const double bin_hz = double(buffer.sample_rate) / fft_size;

  const Eigen::ArrayXd freqs = Eigen::ArrayXd::LinSpaced(bins, 0.0, double(bins - 1)) * bin_hz;
  Eigen::ArrayXd weights = Eigen::ArrayXd::Ones(bins);
  if (weighting) {
    for (Eigen::Index k = 0; k < bins; ++k) weights(k) = weighting->weight(freqs(k));
  }

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> in(std::size_t(fft_size), 0.0);
  std::vector<std::complex<double>> out;

  std::vector<Spectrum> spectra;
  spectra.reserve(blocks.size());
  for (const Frame& frame : blocks) {
    std::copy(frame.block.data(), frame.block.data() + frame.block.size(), in.begin());
    fft.fwd(out, in);
    Spectrum s;
    s.frame_time = frame.time_s;
    s.freqs = freqs;
    s.resolution_hz = double(buffer.sample_rate) / spec.window_size;
    s.window = spec.window_kind;
    if (weighting) s.weight = weights;
    s.power.resize(bins);
    for (Eigen::Index k = 0; k < bins; ++k) s.power(k) = std::norm(out[std::size_t(k)]);
    s.power = s.power / (amplitude_norm * amplitude_norm) * weights;
    spectra.push_back(std::move(s));
  }
  return spectra;
}

Spectrum average_spectrum(std::span<const Spectrum> spectra) {
  if (spectra.empty()) throw std::invalid_argument("average_spectrum: no spectra");
  Spectrum out;
  out.frame_time = spectra[spectra.size() / 2].frame_time;
  out.freqs = spectra.front().freqs;
  out.resolution_hz = spectra.front().resolution_hz;
  out.window = spectra.front().window;
  out.weight = spectra.front().weight;
  out.power = Eigen::ArrayXd::Zero(out.freqs.size());
  for (const Spectrum& s : spectra) {
    if (s.power.size() != out.power.size()) throw std::invalid_argument("average_spectrum: size mismatch");
    out.power += s.power;
  }
  out.power /= double(spectra.size());
  return out;
}

namespace {

double to_db(double power) { return 10.0 * std::log10(std::max(power, 1e-300)); }

// Sidelobe envelope |W(k) / W(0)| of a0 - a1 cos(.) windows, k in window bins.
double sidelobe_envelope(WindowKind kind, double k) {
  double a0 = 1.0, a1 = 0.0;
  if (kind == WindowKind::Hann) a0 = a1 = 0.5;
  if (kind == WindowKind::Hamming) a0 = 0.54, a1 = 0.46;
  return std::abs(a0 / k - a1 * k / (k * k - 1.0)) / (std::numbers::pi * a0);
}

}  // namespace

std::vector<Partial> pick_peaks(const Spectrum& spectrum, const PeakConfig& config) {
  const Eigen::ArrayXd& p = spectrum.power;
  const Eigen::Index n = p.size();
  if (n < 3) return {};
  const double peak_power = p.maxCoeff();
  if (!(peak_power > 0.0)) return {};

  double threshold = peak_power * std::pow(10.0, -config.floor_db / 10.0);
  threshold = std::max(threshold, median(p) * std::pow(10.0, config.noise_margin_db / 10.0));
  const double bin_hz = spectrum.bin_hz();
  const Eigen::Index reach =
      spectrum.resolution_hz > 0.0 ? std::max<Eigen::Index>(1, std::lround(1.5 * spectrum.resolution_hz / bin_hz)) : 1;

  // Peaks are located on the unweighted spectrum so a steep weight slope cannot drag them.
  const bool weighted = spectrum.weight.size() == n;
  const Eigen::ArrayXd raw = weighted ? Eigen::ArrayXd(p / spectrum.weight.max(1e-300)) : p;

  struct Candidate {
    Partial partial;
    double raw_power;
  };
  std::vector<Candidate> candidates;
  for (Eigen::Index k = 1; k + 1 < n; ++k) {
    if (!(raw(k) > raw(k - 1) && raw(k) >= raw(k + 1) && p(k) >= threshold)) continue;
    const Eigen::Index lo = std::max<Eigen::Index>(0, k - reach), hi = std::min<Eigen::Index>(n - 1, k + reach);
    if (raw.segment(lo, hi - lo + 1).maxCoeff() > raw(k)) continue;
    const double a = to_db(raw(k - 1)), b = to_db(raw(k)), c = to_db(raw(k + 1));
    const double curvature = a - 2.0 * b + c;
    double delta = curvature < 0.0 ? 0.5 * (a - c) / curvature : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    const double peak_db = b - 0.25 * (a - c) * delta;
    const double freq = spectrum.freqs(k) + delta * bin_hz;
    if (freq <= 0.0) continue;
    double gain = 1.0;
    if (weighted) {
      const Eigen::Index j = delta < 0.0 ? k - 1 : k;
      const double t = delta < 0.0 ? 1.0 + delta : delta;
      gain = spectrum.weight(j) * (1.0 - t) + spectrum.weight(j + 1) * t;
    }
    const double raw_power = std::pow(10.0, peak_db / 10.0);
    candidates.push_back({Partial::at(freq, raw_power * gain), raw_power});
  }

  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const Candidate& x, const Candidate& y) { return x.partial.power > y.partial.power; });
  auto leakage_only = [&](std::size_t i) {
    if (!(spectrum.resolution_hz > 0.0)) return false;
    double amplitude = 0.0;
    for (const Candidate& other : candidates) {
      if (other.raw_power <= candidates[i].raw_power) continue;
      const double k = std::abs(other.partial.freq - candidates[i].partial.freq) / spectrum.resolution_hz;
      if (k >= 1.5) amplitude += std::sqrt(other.raw_power) * sidelobe_envelope(spectrum.window, k);
    }
    return candidates[i].raw_power < 4.0 * amplitude * amplitude;
  };
  std::vector<Partial> kept;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Partial& cand = candidates[i].partial;
    if (kept.size() >= config.max_peaks) break;
    if (leakage_only(i)) continue;
    const bool crowded = std::any_of(kept.begin(), kept.end(), [&](const Partial& q) {
      return std::abs(cents(cand.freq, q.freq)) < config.min_separation_cents;
    });
    if (!crowded) kept.push_back(cand);
  }
  std::sort(kept.begin(), kept.end(), [](const Partial& x, const Partial& y) { return x.freq < y.freq; });
  return kept;
}

std::vector<Partial> pick_peaks(const Spectrum& spectrum, double floor_db, std::size_t max_peaks) {
  PeakConfig config;
  config.floor_db = floor_db;
  config.max_peaks = max_peaks;
  return pick_peaks(spectrum, config);
}

namespace {

struct GatedGrid {
  GridModel grid;
  std::vector<std::size_t> members;  // indices into the peak list, ascending
  std::optional<std::size_t> anchor;
  double score = 0.0;  // summed power of members and anchor
};

// The first partial of a shifted-residue tone sits off the overtone grid;
// accept one peak roughly a spacing below the lowest grid member.
std::optional<std::size_t> find_anchor(const std::vector<Partial>& peaks, const GatedGrid& g) {
  const std::size_t lowest = g.members.front();
  const double d = g.grid.spacing;
  const double below = g.grid.at(int(std::lround((peaks[lowest].freq - g.grid.offset) / d)) - 1);
  if (!(below > 0.0)) return std::nullopt;
  std::optional<std::size_t> anchor;
  for (std::size_t i = 0; i < lowest; ++i) {
    const double gap = peaks[lowest].freq - peaks[i].freq;
    if (gap < 0.5 * d || gap > 1.5 * d) continue;
    if (!anchor || peaks[i].power > peaks[*anchor].power) anchor = i;
  }
  return anchor;
}

// Fits a grid from one seed and keeps, per harmonic index, the closest peak
// within tolerance.
std::optional<GatedGrid> gate_peaks(const std::vector<Partial>& peaks, double seed, double tol_cents) {
  if (!(seed > 0.0)) return std::nullopt;
  std::vector<double> f(peaks.size()), w(peaks.size());
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    f[i] = peaks[i].freq;
    w[i] = peaks[i].power;
  }
  GridFit fit;
  try {
    fit = fit_regular_grid(f, w, seed);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  if (!(fit.grid.spacing > 0.0)) return std::nullopt;

  std::map<int, std::size_t> by_index;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    const double r = fit.residual_cents(Eigen::Index(i));
    if (!(std::abs(r) <= tol_cents)) continue;
    const int n = fit.indices[i];
    auto [it, inserted] = by_index.emplace(n, i);
    if (!inserted && std::abs(r) < std::abs(fit.residual_cents(Eigen::Index(it->second)))) it->second = i;
  }
  if (by_index.size() < 2) return std::nullopt;

  GatedGrid out;
  out.grid = fit.grid;
  for (const auto& [n, i] : by_index) {
    out.members.push_back(i);
    out.score += peaks[i].power;
  }
  std::sort(out.members.begin(), out.members.end());
  out.anchor = find_anchor(peaks, out);
  if (out.anchor) out.score += peaks[*out.anchor].power;
  return out;
}

double diff_seed(const std::vector<Partial>& peaks, std::size_t first) {
  if (peaks.size() < first + 2) return 0.0;
  const auto m = Eigen::Index(peaks.size() - 1 - first);
  Eigen::ArrayXd d(m), w(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const std::size_t k = first + std::size_t(i);
    d(i) = peaks[k + 1].freq - peaks[k].freq;
    w(i) = peaks[k].power + peaks[k + 1].power;
  }
  return weighted_median(d, w);
}

// Highest score wins; near ties go to the wider spacing so that a
// subharmonic grid cannot win by collecting a few extra weak peaks.
const GatedGrid* best_of(const std::vector<GatedGrid>& candidates) {
  const GatedGrid* best = nullptr;
  for (const GatedGrid& g : candidates)
    if (!best || g.score > best->score) best = &g;
  if (!best) return nullptr;
  const double floor = 0.98 * best->score;
  for (const GatedGrid& g : candidates)
    if (g.score >= floor && g.grid.spacing > best->grid.spacing * (1.0 + 1e-9)) best = &g;
  return best;
}

}  // namespace

std::vector<PartialFrame> track_partials(std::span<const Spectrum> spectra, const TrackingConfig& config) {
  if (spectra.empty()) throw std::invalid_argument("track_partials: no spectra");
  std::vector<PartialFrame> out;
  out.reserve(spectra.size());
  std::optional<GridModel> previous;

  for (const Spectrum& spectrum : spectra) {
    PartialFrame frame;
    frame.time = spectrum.frame_time;
    frame.max_partials = config.max_partials;
    std::vector<Partial> peaks = pick_peaks(spectrum, config.peaks);

    auto finish_unreliable = [&](std::vector<Partial> partials) {
      if (partials.size() > config.max_partials) partials.resize(config.max_partials);
      frame.partials = std::move(partials);
      frame.reliable = false;
      previous.reset();
      out.push_back(std::move(frame));
    };

    if (peaks.size() < 3) {
      finish_unreliable(std::move(peaks));
      continue;
    }

    std::vector<GatedGrid> fresh;
    for (double seed : {diff_seed(peaks, 0), diff_seed(peaks, 1)})
      if (auto g = gate_peaks(peaks, seed, config.tol_cents)) fresh.push_back(*g);
    std::optional<GatedGrid> carried;
    if (previous) carried = gate_peaks(peaks, previous->spacing, config.tol_cents);

    std::vector<GatedGrid> all = fresh;
    if (carried) all.push_back(*carried);
    const GatedGrid* chosen = best_of(all);
    if (previous && chosen && std::abs(cents(chosen->grid.spacing, previous->spacing)) > config.max_delta_cents) {
      // A jump is only accepted when the carried grid no longer explains the frame.
      if (carried && std::abs(cents(carried->grid.spacing, previous->spacing)) <= config.max_delta_cents &&
          carried->score >= 0.5 * chosen->score)
        chosen = &*carried;
    }
    if (!chosen) {
      finish_unreliable(std::move(peaks));
      continue;
    }

    std::vector<Partial> kept;
    if (chosen->anchor) kept.push_back(peaks[*chosen->anchor]);
    for (std::size_t i : chosen->members) kept.push_back(peaks[i]);
    frame.anchored = chosen->anchor.has_value();

    if (kept.size() > config.max_partials) kept.resize(config.max_partials);
    frame.partials = std::move(kept);
    frame.grid = chosen->grid;
    frame.reliable = frame.partials.size() >= 3;
    previous = frame.reliable ? std::optional<GridModel>(chosen->grid) : std::nullopt;
    out.push_back(std::move(frame));
  }
  return out;
}

}  // namespace inharm
