#include "inharm/partial_filter.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include <unsupported/Eigen/FFT>

#include "inharm/spectral.hpp"
#include "inharm/units.hpp"

namespace inharm {

void FilterSpec::validate() const {
  if (!(bandwidth_cents >= 5.0 && bandwidth_cents <= 200.0))
    throw std::invalid_argument("bandwidth_cents must be in [5, 200]");
  for (const FilterTarget& t : targets) {
    if (!(t.center_hz > 0.0) || !std::isfinite(t.center_hz))
      throw std::invalid_argument("filter target centre must be positive");
    if (!std::isfinite(t.gain_db)) throw std::invalid_argument("filter target gain must be finite");
  }
}

FilterTarget parse_filter_target(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) throw std::invalid_argument("filter target must be <hz>:<db>, got '" + std::string(text) + "'");
  auto number = [&](std::string_view part) {
    try {
      std::size_t used = 0;
      const std::string s(part);
      const double v = std::stod(s, &used);
      if (used != s.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::invalid_argument("bad number '" + std::string(part) + "' in filter target");
    }
  };
  return {number(text.substr(0, colon)), number(text.substr(colon + 1))};
}

double filter_gain_db(const FilterSpec& spec, double hz) {
  if (!(hz > 0.0)) return 0.0;
  const double sigma = spec.bandwidth_cents / (2.0 * std::sqrt(2.0 * std::log(2.0)));
  double gain = 0.0;
  for (const FilterTarget& t : spec.targets) {
    const double x = cents(hz, t.center_hz);
    const double g = t.gain_db * std::exp(-x * x / (2.0 * sigma * sigma));
    if (std::abs(g) > std::abs(gain)) gain = g;
  }
  return gain;
}

namespace {

// Linear gain per bin from the peak that owns it.
Eigen::ArrayXd region_mask(const Eigen::ArrayXd& power, double bin_hz, double resolution_hz, const FilterSpec& spec) {
  const Eigen::Index bins = power.size();
  Eigen::ArrayXd mask = Eigen::ArrayXd::Ones(bins);
  Spectrum s;
  s.freqs = Eigen::ArrayXd::LinSpaced(bins, 0.0, double(bins - 1)) * bin_hz;
  s.power = power;
  s.resolution_hz = resolution_hz;
  s.window = WindowKind::Hann;
  const std::vector<Partial> peaks = pick_peaks(s, PeakConfig{200.0, std::size_t(bins), 0.0, 0.0});
  if (peaks.empty()) return mask;

  std::vector<Eigen::Index> centre(peaks.size());
  for (std::size_t i = 0; i < peaks.size(); ++i)
    centre[i] = std::clamp<Eigen::Index>(std::lround(peaks[i].freq / bin_hz), 0, bins - 1);
  Eigen::Index start = 0;
  for (std::size_t i = 0; i < peaks.size(); ++i) {
    Eigen::Index stop = bins;  // exclusive
    if (i + 1 < peaks.size()) {
      Eigen::Index lowest = centre[i];
      for (Eigen::Index k = centre[i]; k <= centre[i + 1]; ++k)
        if (power(k) < power(lowest)) lowest = k;
      stop = lowest + 1;
    }
    const double g = std::pow(10.0, filter_gain_db(spec, peaks[i].freq) / 20.0);
    if (stop > start) mask.segment(start, stop - start).setConstant(g);
    start = stop;
  }
  return mask;
}

}  // namespace

AudioBuffer apply_partial_filter(const AudioBuffer& buffer, const FilterSpec& spec, const FrameSpec& frame) {
  buffer.validate();
  spec.validate();
  frame.validate();
  for (const FilterTarget& t : spec.targets)
    if (t.center_hz >= buffer.sample_rate / 2.0)
      throw std::invalid_argument("filter target " + std::to_string(t.center_hz) + " Hz is at or above Nyquist");

  const Eigen::Index n = frame.window_size;
  const Eigen::Index hop = n / 4;
  const Eigen::Index length = buffer.size();
  if (length == 0) return buffer;

  // One window of silence on each side so every sample sees full overlap.
  const Eigen::Index frames = (length + n) / hop + 1;
  const Eigen::Index padded_length = (frames - 1) * hop + n;
  Eigen::ArrayXd x = Eigen::ArrayXd::Zero(padded_length + n);
  x.segment(n, length) = buffer.samples;
  Eigen::ArrayXd y = Eigen::ArrayXd::Zero(x.size());
  Eigen::ArrayXd norm = Eigen::ArrayXd::Zero(x.size());

  const Eigen::ArrayXd window = make_window(WindowKind::Hann, n);
  const double amplitude_norm = window.sum() / 2.0;
  const double bin_hz = double(buffer.sample_rate) / double(n);

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<double> block(static_cast<std::size_t>(n));
  std::vector<std::complex<double>> spectrum;
  std::vector<double> out;
  Eigen::ArrayXd power(n / 2 + 1);

  for (Eigen::Index start = 0; start + n <= x.size(); start += hop) {
    Eigen::Map<Eigen::ArrayXd>(block.data(), n) = x.segment(start, n) * window;
    fft.fwd(spectrum, block);
    for (Eigen::Index k = 0; k < power.size(); ++k)
      power(k) = std::norm(spectrum[std::size_t(k)]) / (amplitude_norm * amplitude_norm);
    const Eigen::ArrayXd mask = region_mask(power, bin_hz, bin_hz, spec);
    for (Eigen::Index k = 0; k < power.size(); ++k) spectrum[std::size_t(k)] *= mask(k);
    fft.inv(out, spectrum, std::size_t(n));
    y.segment(start, n) += Eigen::Map<const Eigen::ArrayXd>(out.data(), n) * window;
    norm.segment(start, n) += window.square();
  }

  AudioBuffer result;
  result.sample_rate = buffer.sample_rate;
  result.samples = y.segment(n, length) / norm.segment(n, length).max(1e-12);
  return result;
}

}  // namespace inharm
