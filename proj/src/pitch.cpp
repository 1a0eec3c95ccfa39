#include "inharm/pitch.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/FFT>

#include "inharm/error.hpp"
#include "inharm/metrics.hpp"

namespace inharm {

namespace {

// Autocorrelation evaluated at a fractional lag by trigonometric
// interpolation of the zero-padded power spectrum, divided by the overlap.
class ContinuousAcf {
 public:
  ContinuousAcf(const std::vector<double>& power, std::size_t fft_size, std::size_t length)
      : power_(power), m_(fft_size), n_(length) {}

  double operator()(double lag) const {
    const double step = 2.0 * std::numbers::pi * lag / double(m_);
    double acc = power_[0];
    const std::size_t half = m_ / 2;
    for (std::size_t k = 1; k < half; ++k) acc += 2.0 * power_[k] * std::cos(step * double(k));
    acc += power_[half] * std::cos(step * double(half));
    return acc / double(m_) / (double(n_) - lag);
  }

 private:
  const std::vector<double>& power_;
  std::size_t m_, n_;
};

template <typename F>
double golden_maximize(const F& fn, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
  double f1 = fn(x1), f2 = fn(x2);
  for (int i = 0; i < 40; ++i) {
    if (f1 >= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = fn(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = fn(x2);
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double autocorr_pitch(const AudioBuffer& buffer, double fmin, double fmax) {
  buffer.validate();
  if (!(fmin > 0.0 && fmax > fmin)) throw std::invalid_argument("autocorr_pitch: need 0 < fmin < fmax");
  const double sr = buffer.sample_rate;
  if (buffer.duration() < 2.0 / fmin) throw AnalysisError("autocorr_pitch: buffer shorter than 2 / fmin");

  const std::size_t n = std::size_t(buffer.size());
  std::size_t m = 1;
  while (m < 2 * n) m <<= 1;
  std::vector<double> padded(m, 0.0);
  std::copy(buffer.samples.data(), buffer.samples.data() + n, padded.begin());

  Eigen::FFT<double> fft;
  fft.SetFlag(Eigen::FFT<double>::HalfSpectrum);
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, padded);
  std::vector<double> power(spectrum.size());
  std::vector<std::complex<double>> power_c(spectrum.size());
  for (std::size_t k = 0; k < spectrum.size(); ++k) {
    power[k] = std::norm(spectrum[k]);
    power_c[k] = power[k];
  }
  // The autocorrelation is read on a lag grid eight times finer than the
  // sample grid; a peak whose period is not a whole number of samples would
  // otherwise lose to a multiple that happens to land on a sample.
  constexpr std::size_t kUp = 8;
  const std::size_t mu = kUp * m;
  std::vector<std::complex<double>> padded_power(mu / 2 + 1, 0.0);
  for (std::size_t k = 0; k < power_c.size(); ++k) padded_power[k] = power_c[k];
  padded_power[m / 2] *= 0.5;
  std::vector<double> raw;
  fft.inv(raw, padded_power, mu);

  const double energy = raw[0] * double(kUp) / double(n);
  if (!(energy > 0.0)) throw AnalysisError("autocorr_pitch: silent buffer");
  const auto lag_lo = std::max<std::size_t>(std::size_t(std::floor(sr / fmax)) * kUp, 1);
  const auto lag_hi = std::min(std::size_t(std::ceil(sr / fmin)), n - 2) * kUp;
  auto r = [&](std::size_t j) {
    const double lag = double(j) / double(kUp);
    return raw[j] * double(kUp) / (double(n) - lag) / energy;
  };

  struct Peak {
    double lag, height;
  };
  std::vector<Peak> maxima;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = lag_lo; j <= lag_hi; ++j) {
    const double v = r(j);
    if (v > r(j - 1) && v >= r(j + 1)) {
      maxima.push_back({double(j) / double(kUp), v});
      best = std::max(best, v);
    }
  }
  if (maxima.empty() || !(best > 0.0)) throw AnalysisError("autocorr_pitch: no positive peak in range");

  // Peaks near the highest are located on the interpolated autocorrelation;
  // of those that tie with the highest the shortest lag wins.
  const ContinuousAcf acf(power, m, n);
  const double step = 1.0 / double(kUp);
  std::vector<Peak> refined;
  double refined_best = -std::numeric_limits<double>::infinity();
  for (const Peak& p : maxima) {
    if (p.height < 0.98 * best) continue;
    const double lag = golden_maximize(acf, p.lag - step, p.lag + step);
    refined.push_back({lag, acf(lag) / energy});
    refined_best = std::max(refined_best, refined.back().height);
  }
  for (const Peak& p : refined)
    if (p.height >= refined_best * (1.0 - 1e-2)) return sr / p.lag;
  return sr / refined.back().lag;
}

SweepRow analyze_sweep_member(double g_hz, const AudioBuffer& audio, const SweepConfig& config) {
  SweepRow row;
  row.g_hz = g_hz;
  try {
    if (audio.size() < config.frame.window_size) throw AnalysisError("tone shorter than one analysis window");
    const std::vector<Spectrum> spectra = stft(audio, config.frame);
    const std::vector<Partial> peaks = pick_peaks(spectra[spectra.size() / 2], config.peaks);
    if (peaks.size() < 3) throw AnalysisError("fewer than three partials detected");
    const PartialFrame frame = make_frame(peaks, spectra[spectra.size() / 2].frame_time);
    const OvertoneDiffs diffs = overtone_diffs(frame);
    row.f0_partial_hz = peaks[0].freq;
    row.first_pair_diff_hz = peaks[1].freq - peaks[0].freq;
    row.diff_median_hz = diffs.median;
    row.diff_mean_hz = diffs.mean;
    row.autocorr_hz = autocorr_pitch(audio, config.fmin, config.fmax);
  } catch (const AnalysisError& e) {
    row.valid = false;
    row.error = e.what();
  }
  return row;
}

std::vector<SweepRow> run_sweep_experiment(const SweepConfig& config) {
  ToneSpec base;
  base.amplitudes = config.amplitudes;
  base.duration_s = config.duration_s;
  base.level = config.level;
  base.phase_seed = config.phase_seed;
  std::vector<SweepRow> rows;
  for (const auto& [g, spec] : sweep_set(config.n_steps, config.n_partials, base))
    rows.push_back(analyze_sweep_member(g, render(spec, config.sample_rate), config));
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out(kSweepCsvHeader);
  out += '\n';
  char line[256];
  for (const SweepRow& r : rows) {
    if (r.valid)
      std::snprintf(line, sizeof line, "%.4f,%.4f,%.4f,%.4f,%.4f,%.4f\n", r.g_hz, r.f0_partial_hz, r.autocorr_hz,
                    r.diff_median_hz, r.diff_mean_hz, r.first_pair_diff_hz);
    else
      std::snprintf(line, sizeof line, "%.4f,nan,nan,nan,nan,nan\n", r.g_hz);
    out += line;
  }
  return out;
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kSweepCsvHeader) throw std::invalid_argument("sweep CSV: unexpected header");
  std::vector<SweepRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string cell;
    double v[6];
    int count = 0;
    while (count < 6 && std::getline(fields, cell, ',')) v[count++] = cell == "nan" ? std::nan("") : std::stod(cell);
    if (count != 6) throw std::invalid_argument("sweep CSV: expected six columns in '" + line + "'");
    SweepRow r{v[0], v[1], v[2], v[3], v[4], v[5], !std::isnan(v[1]), {}};
    rows.push_back(r);
  }
  return rows;
}

}  // namespace inharm
