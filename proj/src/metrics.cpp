#include "inharm/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

#include "inharm/error.hpp"
#include "inharm/stats.hpp"
#include "inharm/units.hpp"

namespace inharm {

// ---------------------------------------------------------------------------
// Differences

DiffStats diff_stats(const PartialFrame& frame, double outlier_cents) {
  const auto n = Eigen::Index(frame.partials.size());
  if (n < 2) throw AnalysisError("diff_stats: need at least two partials");
  const Eigen::ArrayXd f = frame.freqs();
  const Eigen::ArrayXd p = frame.powers();

  DiffStats out;
  out.diffs = f.tail(n - 1) - f.head(n - 1);
  out.weights = p.tail(n - 1) + p.head(n - 1);
  out.weighted_median = weighted_median(out.diffs, out.weights);
  out.weighted_mean = weighted_mean(out.diffs, out.weights);
  out.mad_cents = median(cents(out.diffs, out.weighted_median).abs().eval());

  if (n >= 3) {
    const double rest = weighted_median(out.diffs.tail(n - 2), out.weights.tail(n - 2));
    out.first_diff_outlier_cents = cents(out.diffs(0), rest);
    out.first_diff_outlier = std::abs(out.first_diff_outlier_cents) > outlier_cents;
  }
  return out;
}

OvertoneDiffs overtone_diffs(const PartialFrame& frame) {
  const auto n = Eigen::Index(frame.partials.size());
  if (n < 3) throw AnalysisError("overtone_diffs: need at least three partials");
  const Eigen::ArrayXd f = frame.freqs();
  const Eigen::ArrayXd p = frame.powers();
  const Eigen::ArrayXd d = f.tail(n - 2) - f.segment(1, n - 2);
  const Eigen::ArrayXd w = p.tail(n - 2) + p.segment(1, n - 2);
  return {weighted_median(d, w), weighted_mean(d, w)};
}

// ---------------------------------------------------------------------------
// Least-deviating harmonic series

namespace {

// Power-weighted RMS distance to the nearest harmonic, in units of the
// candidate spacing. Measuring in spacing units rather than cents keeps
// subharmonics from winning by default.
double series_misfit(const Eigen::ArrayXd& f, const Eigen::ArrayXd& w, double f0) {
  const Eigen::ArrayXd n = (f / f0).round().max(1.0);
  return std::sqrt((w * ((f - n * f0) / f0).square()).sum());
}

template <typename F>
double golden_minimize(F&& fn, double lo, double hi, int iterations = 80) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < iterations && (b - a) > 1e-15 * std::max(1.0, std::abs(b)); ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = fn(d);
    }
  }
  return fc <= fd ? c : d;
}

}  // namespace

F0Estimate estimate_f0_least_deviating(const PartialFrame& frame) {
  if (frame.partials.size() < 2) throw AnalysisError("estimate_f0_least_deviating: need at least two partials");
  const Eigen::ArrayXd f = frame.freqs();
  Eigen::ArrayXd w = frame.powers();
  w = w.sum() > 0.0 ? (w / w.sum()).eval() : Eigen::ArrayXd::Constant(f.size(), 1.0 / f.size());

  const double lo = f(0) / 8.0, hi = f(0) * 1.5;
  const double step = std::exp2(0.25 / 1200.0);  // quarter-cent grid
  std::vector<double> grid;
  for (double c = lo; c <= hi; c *= step) grid.push_back(c);
  std::vector<double> misfit(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) misfit[i] = series_misfit(f, w, grid[i]);

  struct Minimum {
    double f0, value;
  };
  std::vector<Minimum> minima;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const bool left = i == 0 || misfit[i] <= misfit[i - 1];
    const bool right = i + 1 == grid.size() || misfit[i] <= misfit[i + 1];
    if (!(left && right)) continue;
    const double a = grid[i > 0 ? i - 1 : i], b = grid[i + 1 < grid.size() ? i + 1 : i];
    const double best = a < b ? golden_minimize([&](double c) { return series_misfit(f, w, c); }, a, b) : grid[i];
    const double value = series_misfit(f, w, best);
    minima.push_back(value <= misfit[i] ? Minimum{best, value} : Minimum{grid[i], misfit[i]});
  }

  double floor_value = std::numeric_limits<double>::infinity();
  for (const Minimum& m : minima) floor_value = std::min(floor_value, m.value);
  // Exact subharmonics tie with the true series; the highest candidate wins.
  constexpr double kTie = 1e-3;
  double chosen = 0.0;
  for (const Minimum& m : minima)
    if (m.value <= floor_value + kTie) chosen = std::max(chosen, m.f0);

  const Eigen::ArrayXd n = (f / chosen).round().max(1.0);
  const double dev = std::sqrt((w * cents(f / (n * chosen), 1.0).square()).sum());
  return {chosen, dev};
}

// ---------------------------------------------------------------------------
// Regular grid

GridFit fit_regular_grid(std::span<const double> freqs, std::span<const double> weights, double seed_spacing,
                         const GridFitOptions& options) {
  const auto k = Eigen::Index(freqs.size());
  if (k < 2) throw AnalysisError("fit_regular_grid: need at least two frequencies");
  if (!(seed_spacing > 0.0)) throw AnalysisError("fit_regular_grid: seed spacing must be positive");
  const Eigen::Map<const Eigen::ArrayXd> f(freqs.data(), k);
  Eigen::ArrayXd w = Eigen::ArrayXd::Ones(k);
  if (Eigen::Index(weights.size()) == k) {
    w = Eigen::Map<const Eigen::ArrayXd>(weights.data(), k);
    if (!(w.sum() > 0.0)) w.setOnes();
  }

  double d = seed_spacing;
  const Eigen::ArrayXd phase = f / d * (2.0 * std::numbers::pi);
  double s = std::atan2((w * phase.sin()).sum(), (w * phase.cos()).sum()) / (2.0 * std::numbers::pi) * d;

  std::vector<int> n(static_cast<std::size_t>(k));
  std::vector<bool> inlier(static_cast<std::size_t>(k), true);
  Eigen::ArrayXd resid(k);

  auto assign = [&] {
    for (Eigen::Index i = 0; i < k; ++i) n[std::size_t(i)] = int(std::lround((f(i) - s) / d));
  };
  auto residuals = [&] {
    for (Eigen::Index i = 0; i < k; ++i) {
      const double predicted = n[std::size_t(i)] * d + s;
      resid(i) = predicted > 0.0 ? cents(f(i), predicted) : 1e6;
    }
  };
  auto solve = [&]() -> bool {
    double sn = 0, sf = 0, snn = 0, snf = 0, m = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      if (!inlier[std::size_t(i)]) continue;
      const double x = n[std::size_t(i)];
      sn += x;
      sf += f(i);
      snn += x * x;
      snf += x * f(i);
      m += 1;
    }
    const double det = m * snn - sn * sn;
    if (m < 2 || !(std::abs(det) > 0.0)) return false;
    const double new_d = (m * snf - sn * sf) / det;
    if (!(new_d > 0.0)) return false;
    d = new_d;
    s = (sf - d * sn) / m;
    return true;
  };
  auto dedupe = [&] {
    if (!options.one_per_index) return;
    for (Eigen::Index i = 0; i < k; ++i) {
      for (Eigen::Index j = i + 1; j < k; ++j) {
        if (n[std::size_t(i)] != n[std::size_t(j)] || !inlier[std::size_t(i)] || !inlier[std::size_t(j)]) continue;
        const Eigen::Index worse = std::abs(f(i) - (n[std::size_t(i)] * d + s)) <= std::abs(f(j) - (n[std::size_t(j)] * d + s)) ? j : i;
        inlier[std::size_t(worse)] = false;
      }
    }
  };

  for (int pass = 0; pass <= options.refit_passes; ++pass) {
    assign();
    dedupe();
    if (!solve()) break;
    assign();
    residuals();
    std::vector<double> used;
    for (Eigen::Index i = 0; i < k; ++i)
      if (inlier[std::size_t(i)]) used.push_back(resid(i));
    const Eigen::Map<Eigen::ArrayXd> r(used.data(), Eigen::Index(used.size()));
    const double centre = median(r);
    const double mad = median((r - centre).abs().eval());
    const double limit = std::max(options.trim_floor_cents, options.trim_scale * 1.4826 * mad);
    // Every point is re-tested so early outliers of a poor seed can return.
    std::vector<bool> next(static_cast<std::size_t>(k));
    std::size_t remaining = 0;
    for (Eigen::Index i = 0; i < k; ++i) {
      next[std::size_t(i)] = std::abs(resid(i) - centre) <= limit;
      remaining += next[std::size_t(i)] ? 1 : 0;
    }
    if (remaining >= 2 && 2 * remaining >= used.size()) inlier = next;
  }
  assign();
  solve();
  assign();
  residuals();

  GridFit out;
  out.grid = {d, s};
  out.indices = n;
  out.inlier = inlier;
  out.residual_cents = resid;
  out.rms_cents = std::sqrt(resid.square().mean());
  double acc = 0.0;
  std::size_t used = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    if (!inlier[std::size_t(i)]) continue;
    acc += resid(i) * resid(i);
    ++used;
  }
  out.inlier_rms_cents = used > 0 ? std::sqrt(acc / double(used)) : 0.0;
  return out;
}

ShiftEstimate estimate_shift(const PartialFrame& frame, std::optional<double> seed_spacing, double fail_cents) {
  if (frame.partials.size() < 3) throw AnalysisError("estimate_shift: need at least three partials");
  const Eigen::ArrayXd f = frame.freqs();
  const Eigen::ArrayXd p = frame.powers();
  const std::span<const double> fs(f.data(), std::size_t(f.size())), ps(p.data(), std::size_t(p.size()));

  // The first difference of a shifted-residue tone can dominate the weighted
  // median, so the overtone differences are tried as a second seed.
  std::vector<double> seeds;
  if (seed_spacing) seeds.push_back(*seed_spacing);
  else {
    seeds.push_back(diff_stats(frame).weighted_median);
    if (frame.partials.size() >= 4) seeds.push_back(overtone_diffs(frame).median);
  }
  // A fit within fail_cents beats one outside it, then more inliers, then lower RMS.
  std::optional<GridFit> best;
  std::ptrdiff_t best_inliers = 0;
  auto acceptable = [&](const GridFit& g, std::ptrdiff_t n) { return n >= 3 && g.inlier_rms_cents <= fail_cents; };
  for (double seed : seeds) {
    GridFit fit = fit_regular_grid(fs, ps, seed);
    const auto inliers = std::count(fit.inlier.begin(), fit.inlier.end(), true);
    bool better = !best;
    if (best) {
      const bool ok = acceptable(fit, inliers), best_ok = acceptable(*best, best_inliers);
      if (ok != best_ok) better = ok;
      else better = inliers > best_inliers || (inliers == best_inliers && fit.inlier_rms_cents < best->inlier_rms_cents);
    }
    if (better) {
      best = std::move(fit);
      best_inliers = inliers;
    }
  }
  const GridFit& fit = *best;
  if (!acceptable(fit, best_inliers))
    throw AnalysisError("no regular grid (inlier rms " + std::to_string(fit.inlier_rms_cents) + " cents)");

  ShiftEstimate out;
  out.d = fit.grid.spacing;
  const double wraps = std::floor(fit.grid.offset / out.d);
  out.s = fit.grid.offset - wraps * out.d;
  if (out.s >= out.d) out.s = 0.0;
  out.indices.resize(fit.indices.size());
  for (std::size_t i = 0; i < fit.indices.size(); ++i) out.indices[i] = fit.indices[i] + int(wraps);
  out.rms_cents = fit.rms_cents;
  return out;
}

Eigen::ArrayXd reconstruct(const ShiftEstimate& shift) {
  Eigen::ArrayXd out(Eigen::Index(shift.indices.size()));
  for (std::size_t i = 0; i < shift.indices.size(); ++i) out(Eigen::Index(i)) = shift.indices[i] * shift.d + shift.s;
  return out;
}

// ---------------------------------------------------------------------------
// Typology

std::string_view to_string(ToneKind kind) {
  switch (kind) {
    case ToneKind::Harmonic: return "harmonic";
    case ToneKind::Type1ShiftedResidue: return "type1_shifted_residue";
    case ToneKind::Type2Regular: return "type2_regular";
    case ToneKind::Type3NoisyHarmonic: return "type3_noisy_harmonic";
    case ToneKind::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::string_view to_string(Regularity regularity) {
  switch (regularity) {
    case Regularity::None: return "none";
    case Regularity::Stretched: return "stretched";
    case Regularity::Compressed: return "compressed";
  }
  return "none";
}

ToneKind parse_tone_kind(std::string_view name) {
  for (ToneKind k : {ToneKind::Harmonic, ToneKind::Type1ShiftedResidue, ToneKind::Type2Regular,
                     ToneKind::Type3NoisyHarmonic, ToneKind::Unclassified})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown tone kind: " + std::string(name));
}

void Thresholds::set(std::string_view key, double value) {
  if (!std::isfinite(value) || value < 0.0)
    throw std::invalid_argument("threshold " + std::string(key) + " must be a nonnegative number");
  if (key == "tight_cents") tight_cents = value;
  else if (key == "outlier_cents") outlier_cents = value;
  else if (key == "jitter_cents") jitter_cents = value;
  else if (key == "noisy_max_cents") noisy_max_cents = value;
  else if (key == "loose_cents") loose_cents = value;
  else throw std::invalid_argument("unknown threshold key: " + std::string(key));
}

void Thresholds::validate() const {
  if (!(jitter_cents < noisy_max_cents)) throw std::invalid_argument("jitter_cents must be below noisy_max_cents");
}

void apply_config_line(Thresholds& thresholds, std::string_view line) {
  std::string text(line.substr(0, line.find('#')));
  const auto eq = text.find('=');
  auto trim = [](std::string s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return std::string();
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
  };
  if (trim(text).empty()) return;
  if (eq == std::string::npos) throw std::invalid_argument("config line without '=': " + std::string(line));
  const std::string key = trim(text.substr(0, eq));
  const std::string raw = trim(text.substr(eq + 1));
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(raw, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != raw.size()) throw std::invalid_argument("bad value for " + key + ": '" + raw + "'");
  thresholds.set(key, value);
}

Thresholds load_thresholds(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  Thresholds t;
  std::string line;
  while (std::getline(in, line)) apply_config_line(t, line);
  t.validate();
  return t;
}

namespace {

struct HarmonicSpread {
  double f0 = 0.0;
  Eigen::ArrayXd residual_cents;  // per partial, about n * f0
  double jitter = 0.0;            // sqrt(3) * RMS cents
  double median_abs = 0.0;
};

// Best pure harmonic series n * f0 in the log domain. `unit` seeds the
// harmonic numbers; the lowest partial fixes the starting f0.
HarmonicSpread harmonic_spread(const Eigen::ArrayXd& f, double unit) {
  double f0 = f(0) / std::max(1.0, std::round(f(0) / unit));
  Eigen::ArrayXd n(f.size());
  for (int pass = 0; pass < 3; ++pass) {
    n = (f / f0).round().max(1.0);
    f0 = std::exp(((f / n).log()).mean());
  }
  n = (f / f0).round().max(1.0);
  HarmonicSpread out;
  out.f0 = f0;
  out.residual_cents = cents(f, (n * f0).eval());
  out.jitter = std::sqrt(3.0) * std::sqrt(out.residual_cents.square().mean());
  out.median_abs = median(out.residual_cents.abs().eval());
  return out;
}

struct SpacingSeed {
  double c = 0.0;
  bool octave = false;
};

SpacingSeed spacing_seed(const DiffStats& stats, double f1, double tight_cents) {
  const auto m = stats.diffs.size();
  SpacingSeed out;
  out.c = m >= 2 ? weighted_median(stats.diffs.tail(m - 1), stats.weights.tail(m - 1)) : stats.weighted_median;
  if (std::abs(cents(out.c, 2.0 * f1)) <= tight_cents) {
    // Odd harmonics only: consecutive partials are two spacings apart.
    out.octave = true;
    out.c /= 2.0;
  }
  return out;
}

}  // namespace

double grid_jitter_cents(const PartialFrame& frame) {
  if (frame.partials.size() < 3) return 0.0;
  const Eigen::ArrayXd f = frame.freqs();
  const SpacingSeed seed = spacing_seed(diff_stats(frame), f(0), Thresholds{}.tight_cents);
  return harmonic_spread(f, seed.c).jitter;
}

ToneClassification classify_tone(const PartialFrame& frame, const Thresholds& th) {
  if (frame.partials.size() < 4) throw AnalysisError("classify_tone: need at least four partials");
  const Eigen::ArrayXd f = frame.freqs();
  const auto m = f.size();
  const DiffStats stats = diff_stats(frame, th.outlier_cents);
  const Eigen::ArrayXd& diffs = stats.diffs;

  ToneClassification out;
  const double f1 = f(0);
  const SpacingSeed seed = spacing_seed(stats, f1, th.tight_cents);
  const double c = seed.c;
  out.octave_adjusted = seed.octave;
  const double step = out.octave_adjusted ? 2.0 * c : c;
  const Eigen::ArrayXd diff_dev = cents(diffs, step).abs();
  const bool all_tight = (diff_dev <= th.tight_cents).all();
  const bool overtones_tight = (diff_dev.tail(m - 2) <= th.tight_cents).all();
  const double f1_dev = std::abs(cents(c, f1));

  const HarmonicSpread spread = harmonic_spread(f, c);
  out.jitter_cents = spread.jitter;
  out.spacing_d = c;

  if (all_tight && f1_dev <= th.tight_cents && spread.jitter <= th.jitter_cents) {
    out.kind = ToneKind::Harmonic;
    return out;
  }
  if (overtones_tight && std::abs(cents(diffs(0), step)) > th.outlier_cents) {
    out.kind = ToneKind::Type1ShiftedResidue;
    out.shift_s = f(1) - (out.octave_adjusted ? 3.0 : 2.0) * c;
    return out;
  }
  if (all_tight && f1_dev > th.tight_cents) {
    out.kind = ToneKind::Type2Regular;
    out.regularity = c > f1 ? Regularity::Stretched : Regularity::Compressed;
    try {
      const ShiftEstimate shift = estimate_shift(frame, step);
      out.spacing_d = shift.d;
      out.shift_s = shift.s;
    } catch (const AnalysisError&) {
      out.shift_s = f1 - std::floor(f1 / step) * step;
    }
    return out;
  }
  // Loose alignment: the typical partial sits within loose_cents of a
  // harmonic of the fitted fundamental.
  if (spread.jitter > th.jitter_cents && spread.jitter <= th.noisy_max_cents && spread.median_abs <= th.loose_cents) {
    out.kind = ToneKind::Type3NoisyHarmonic;
    out.spacing_d = spread.f0;
    return out;
  }
  out.kind = ToneKind::Unclassified;
  return out;
}

// ---------------------------------------------------------------------------
// Stiff string

double piano_difference_model(int n, double f0, double B) {
  return piano_partial(n + 1, f0, B) - piano_partial(n, f0, B);
}

namespace {

double string_gap(int a, int b, double B) {
  return b * std::sqrt(1.0 + B * b * b) - a * std::sqrt(1.0 + B * a * a);
}

}  // namespace

InharmonicityFit fit_inharmonicity_coefficient(const PartialFrame& frame, double max_residual_fraction) {
  const std::size_t k = frame.partials.size();
  if (k < 6) throw AnalysisError("fit_inharmonicity_coefficient: need at least six partials");
  const Eigen::ArrayXd f = frame.freqs();

  std::vector<int> idx(k);
  double local = f(1) - f(0);
  idx[0] = std::max(1, int(std::lround(f(0) / local)));
  for (std::size_t i = 1; i < k; ++i) {
    const double gap = f(Eigen::Index(i)) - f(Eigen::Index(i - 1));
    const int steps = std::max(1, int(std::lround(gap / local)));
    idx[i] = idx[i - 1] + steps;
    local = gap / steps;
  }

  const Eigen::Index m = Eigen::Index(k - 1);
  const Eigen::ArrayXd observed = f.tail(m) - f.head(m);
  auto gaps = [&](double B) {
    Eigen::ArrayXd g(m);
    for (Eigen::Index i = 0; i < m; ++i) g(i) = string_gap(idx[std::size_t(i)], idx[std::size_t(i + 1)], B);
    return g;
  };
  auto best_f0 = [&](const Eigen::ArrayXd& g) { return (observed * g).sum() / g.square().sum(); };
  auto cost = [&](double B) {
    const Eigen::ArrayXd g = gaps(B);
    return (observed - best_f0(g) * g).square().sum();
  };

  std::vector<double> grid{0.0};
  for (int i = 0; i <= 120; ++i) grid.push_back(std::pow(10.0, -8.0 + 6.0 * i / 120.0));
  std::size_t best = 0;
  double best_cost = cost(grid[0]);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double c = cost(grid[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  const double lo = grid[best > 0 ? best - 1 : 0];
  const double hi = grid[std::min(best + 1, grid.size() - 1)];
  double B = golden_minimize(cost, lo, hi, 200);
  if (cost(grid[best]) < cost(B)) B = grid[best];
  B = std::max(0.0, B);

  InharmonicityFit out;
  out.B = B;
  out.f0 = best_f0(gaps(B));
  out.residual_rms = std::sqrt(cost(B) / double(m));
  out.indices = idx;
  if (!(out.f0 > 0.0) || !std::isfinite(out.residual_rms) || out.residual_rms > max_residual_fraction * out.f0) {
    std::ostringstream msg;
    msg << "inharmonicity fit diverged: residual " << out.residual_rms << " Hz at B=" << out.B << ", f0=" << out.f0;
    throw AnalysisError(msg.str());
  }
  return out;
}

}  // namespace inharm
