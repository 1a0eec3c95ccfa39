#include "inharm/loudness.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "inharm/error.hpp"

namespace inharm {

namespace {

// ISO 226:2003 Table 1: frequency, exponent of loudness perception (af),
// magnitude of the linear transfer function normalised at 1 kHz (Lu),
// threshold of hearing (Tf).
constexpr std::array<double, 29> kIsoHz = {20,   25,   31.5, 40,   50,   63,   80,   100,  125,  160,
                                           200,  250,  315,  400,  500,  630,  800,  1000, 1250, 1600,
                                           2000, 2500, 3150, 4000, 5000, 6300, 8000, 10000, 12500};
constexpr std::array<double, 29> kIsoAf = {0.532, 0.506, 0.480, 0.455, 0.432, 0.409, 0.387, 0.367,
                                           0.349, 0.330, 0.315, 0.301, 0.288, 0.276, 0.267, 0.259,
                                           0.253, 0.250, 0.246, 0.244, 0.243, 0.243, 0.243, 0.242,
                                           0.242, 0.245, 0.254, 0.271, 0.301};
constexpr std::array<double, 29> kIsoLu = {-31.6, -27.2, -23.0, -19.1, -15.9, -13.0, -10.3, -8.1,
                                           -6.2,  -4.5,  -3.1,  -2.0,  -1.1,  -0.4,  0.0,   0.3,
                                           0.5,   0.0,   -2.7,  -4.1,  -1.0,  1.7,   2.5,   1.2,
                                           -2.1,  -7.1,  -11.2, -10.7, -3.1};
constexpr std::array<double, 29> kIsoTf = {78.5, 68.7, 59.5, 51.1, 44.0, 37.5, 31.5, 26.5, 22.1, 17.9,
                                           14.4, 11.4, 8.6,  6.2,  4.4,  3.0,  2.2,  2.4,  3.5,  1.7,
                                           -1.3, -4.2, -6.0, -5.4, -1.5, 6.0,  12.6, 13.9, 12.3};
constexpr std::size_t kIso1k = 17;

}  // namespace

LoudnessContour::LoudnessContour(std::vector<double> hz, std::vector<double> spl_db, double phon_level)
    : hz_(std::move(hz)), spl_(std::move(spl_db)), phon_(phon_level) {
  if (hz_.size() != spl_.size() || hz_.size() < 2)
    throw std::invalid_argument("LoudnessContour: need at least two (Hz, dB) anchors");
  for (std::size_t i = 0; i < hz_.size(); ++i) {
    if (!(hz_[i] > 0) || !std::isfinite(hz_[i]) || !std::isfinite(spl_[i]))
      throw std::invalid_argument("LoudnessContour: anchors must be finite with positive frequency");
    if (i > 0 && !(hz_[i] > hz_[i - 1]))
      throw std::invalid_argument("LoudnessContour: frequencies must be strictly increasing");
  }
  if (hz_.front() > 20.0 || hz_.back() < 12500.0)
    throw std::invalid_argument("LoudnessContour: anchors must cover 20 Hz to 12.5 kHz");
  if (!(phon_ >= 0.0 && phon_ <= 90.0))
    throw std::invalid_argument("LoudnessContour: phon level must lie in 0..90");
  log_hz_.resize(hz_.size());
  std::transform(hz_.begin(), hz_.end(), log_hz_.begin(), [](double f) { return std::log(f); });
}

LoudnessContour LoudnessContour::iso226(double phon) {
  if (!(phon >= 0.0 && phon <= 90.0)) throw std::invalid_argument("iso226: phon level must lie in 0..90");
  std::vector<double> hz(kIsoHz.begin(), kIsoHz.end());
  std::vector<double> spl(hz.size());
  for (std::size_t i = 0; i < hz.size(); ++i) {
    const double af = kIsoAf[i];
    const double a = 4.47e-3 * (std::pow(10.0, 0.025 * phon) - 1.15) +
                     std::pow(0.4 * std::pow(10.0, (kIsoTf[i] + kIsoLu[i]) / 10.0 - 9.0), af);
    spl[i] = 10.0 / af * std::log10(a) - kIsoLu[i] + 94.0;
  }
  // The tabulated formula misses the definition at 1 kHz by a few hundredths
  // of a dB; shift the curve so the reference point is exact.
  const double offset = spl[kIso1k] - phon;
  for (double& v : spl) v -= offset;
  spl[kIso1k] = phon;
  return LoudnessContour(std::move(hz), std::move(spl), phon);
}

LoudnessContour LoudnessContour::from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open contour file " + path.string());
  std::vector<double> hz, spl;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double f = 0, db = 0;
    if (!(fields >> f >> db)) {
      if (hz.empty() && lineno == 1) continue;  // header
      throw IoError(path.string() + ":" + std::to_string(lineno) + ": expected 'hz,db'");
    }
    hz.push_back(f);
    spl.push_back(db);
  }
  try {
    // The level is defined by the 1 kHz value; build once to interpolate it.
    LoudnessContour probe(hz, spl, 0.0);
    const double phon = probe.spl(1000.0);
    return LoudnessContour(std::move(hz), std::move(spl), phon);
  } catch (const std::invalid_argument& e) {
    throw IoError(path.string() + ": " + e.what());
  }
}

double LoudnessContour::spl(double hz) const {
  if (!(hz > hz_.front())) return spl_.front();
  if (!(hz < hz_.back())) return spl_.back();
  const auto upper = std::upper_bound(hz_.begin(), hz_.end(), hz);
  const auto i = std::size_t(upper - hz_.begin());  // hz_[i-1] <= hz < hz_[i]
  if (hz == hz_[i - 1]) return spl_[i - 1];
  const double t = (std::log(hz) - log_hz_[i - 1]) / (log_hz_[i] - log_hz_[i - 1]);
  return spl_[i - 1] + t * (spl_[i] - spl_[i - 1]);
}

double LoudnessContour::weight(double hz) const { return std::pow(10.0, (phon_ - spl(hz)) / 10.0); }

Eigen::ArrayXd weight_power_spectrum(const Eigen::ArrayXd& hz, const Eigen::ArrayXd& power,
                                     const LoudnessContour& contour) {
  if (hz.size() != power.size()) throw std::invalid_argument("weight_power_spectrum: size mismatch");
  if ((power < 0.0).any()) throw std::invalid_argument("weight_power_spectrum: negative power");
  Eigen::ArrayXd out(power.size());
  for (Eigen::Index i = 0; i < power.size(); ++i) out(i) = power(i) * contour.weight(hz(i));
  return out;
}

}  // namespace inharm
