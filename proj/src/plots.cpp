#include "inharm/plots.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include "inharm/metrics.hpp"
#include "inharm/units.hpp"

namespace inharm {

PlotKind parse_plot_kind(std::string_view name) {
  for (PlotKind k : {PlotKind::SpectrogramOverlay, PlotKind::SpectrumFrame, PlotKind::DiffDistribution,
                     PlotKind::SweepCurves, PlotKind::ShiftDiagram})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown plot kind: " + std::string(name));
}

std::string_view to_string(PlotKind kind) {
  switch (kind) {
    case PlotKind::SpectrogramOverlay: return "spectrogram_overlay";
    case PlotKind::SpectrumFrame: return "spectrum_frame";
    case PlotKind::DiffDistribution: return "diff_distribution";
    case PlotKind::SweepCurves: return "sweep_curves";
    case PlotKind::ShiftDiagram: return "shift_diagram";
  }
  return "spectrogram_overlay";
}

AxisMode parse_axis_mode(std::string_view name) {
  if (name == "hz") return AxisMode::Hz;
  if (name == "midi") return AxisMode::Midi;
  throw std::invalid_argument("axis mode must be hz or midi, got " + std::string(name));
}

Axis Axis::for_frequencies(AxisMode mode, double lo_hz, double hi_hz, double px_lo, double px_hi) {
  if (!(hi_hz > lo_hz)) throw std::invalid_argument("axis range is empty");
  Axis a;
  a.mode = mode;
  a.lo = mode == AxisMode::Midi ? hz_to_midi(lo_hz) : lo_hz;
  a.hi = mode == AxisMode::Midi ? hz_to_midi(hi_hz) : hi_hz;
  a.px_lo = px_lo;
  a.px_hi = px_hi;
  return a;
}

double Axis::value(double hz) const { return mode == AxisMode::Midi ? hz_to_midi(hz) : hz; }

double Axis::map_value(double v) const { return px_lo + (v - lo) / (hi - lo) * (px_hi - px_lo); }

double Axis::map(double hz) const { return map_value(value(hz)); }

std::vector<double> Axis::gridlines() const {
  std::vector<double> out;
  const double span = hi - lo;
  if (mode == AxisMode::Midi) {
    // Steps keep A4 (69) on a gridline whenever it is in range.
    const int step = span <= 24 ? 1 : span <= 48 ? 3 : 12;
    int m = int(std::ceil(lo));
    while ((m - 69) % step != 0) ++m;
    for (; m <= hi; m += step) out.push_back(m);
    return out;
  }
  const double raw = span / 8.0;
  const double magnitude = std::pow(10.0, std::floor(std::log10(raw)));
  double step = magnitude;
  for (double f : {1.0, 2.0, 5.0, 10.0})
    if (f * magnitude >= raw) {
      step = f * magnitude;
      break;
    }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) out.push_back(std::round(v / step) * step);
  return out;
}

namespace {

constexpr double kLeft = 80, kRight = 1170, kTop = 40, kBottom = 340;
constexpr const char* kYellow = "#f2c80f";
constexpr const char* kBlue = "#1f5fd6";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", std::abs(v) < 5e-3 ? 0.0 : v);
  return buf;
}

std::string escape(std::string_view text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string label(double v, AxisMode mode) {
  if (mode == AxisMode::Midi) {
    const int m = int(std::lround(v));
    return std::to_string(m) + " " + note_name(m);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

class Svg {
 public:
  explicit Svg(const std::string& title, const std::string& kind) {
    body_ += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    body_ += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(kPlotWidth) +
             "\" height=\"" + std::to_string(kPlotHeight) + "\" viewBox=\"0 0 " + std::to_string(kPlotWidth) + " " +
             std::to_string(kPlotHeight) + "\" data-kind=\"" + kind + "\">\n";
    body_ += "<rect x=\"0\" y=\"0\" width=\"" + std::to_string(kPlotWidth) + "\" height=\"" +
             std::to_string(kPlotHeight) + "\" fill=\"white\"/>\n";
    text(kLeft, 24, title, "start", 16);
  }
  void raw(const std::string& s) { body_ += s; }
  void line(double x1, double y1, double x2, double y2, const std::string& stroke, double width = 1.0,
            const std::string& extra = "") {
    body_ += "<line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) + "\" y2=\"" + num(y2) +
             "\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"" + extra + "/>\n";
  }
  void rect(double x, double y, double w, double h, const std::string& fill, const std::string& extra = "") {
    body_ += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) + "\" height=\"" + num(h) +
             "\" fill=\"" + fill + "\"" + extra + "/>\n";
  }
  void circle(double x, double y, double r, const std::string& fill, const std::string& extra = "") {
    body_ += "<circle cx=\"" + num(x) + "\" cy=\"" + num(y) + "\" r=\"" + num(r) + "\" fill=\"" + fill + "\"" + extra +
             "/>\n";
  }
  void polyline(const std::vector<std::pair<double, double>>& pts, const std::string& stroke, double width,
                const std::string& extra = "") {
    if (pts.empty()) return;
    body_ += "<polyline fill=\"none\" stroke=\"" + stroke + "\" stroke-width=\"" + num(width) + "\"" + extra +
             " points=\"";
    for (std::size_t i = 0; i < pts.size(); ++i) body_ += (i ? " " : "") + num(pts[i].first) + "," + num(pts[i].second);
    body_ += "\"/>\n";
  }
  void text(double x, double y, const std::string& s, const std::string& anchor = "middle", int size = 12,
            const std::string& extra = "") {
    body_ += "<text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"sans-serif\" font-size=\"" +
             std::to_string(size) + "\" text-anchor=\"" + anchor + "\"" + extra + ">" + escape(s) + "</text>\n";
  }
  std::string finish() { return body_ + "</svg>\n"; }

 private:
  std::string body_;
};

void x_axis(Svg& svg, const Axis& axis, const std::string& caption) {
  for (double v : axis.gridlines()) {
    const double x = axis.map_value(v);
    svg.line(x, kTop, x, kBottom, "#cccccc", 0.5, " class=\"grid\" data-axis=\"x\" data-value=\"" + num(v) + "\"");
    svg.text(x, kBottom + 16, label(v, axis.mode), "middle", 10);
  }
  svg.line(kLeft, kBottom, kRight, kBottom, "black");
  svg.text((kLeft + kRight) / 2, kBottom + 40, caption);
}

void y_axis(Svg& svg, const Axis& axis, const std::string& caption) {
  for (double v : axis.gridlines()) {
    const double y = axis.map_value(v);
    svg.line(kLeft, y, kRight, y, "#cccccc", 0.5, " class=\"grid\" data-axis=\"y\" data-value=\"" + num(v) + "\"");
    svg.text(kLeft - 6, y + 4, label(v, axis.mode), "end", 10);
  }
  svg.line(kLeft, kTop, kLeft, kBottom, "black");
  svg.text(18, (kTop + kBottom) / 2, caption, "middle", 12,
           " transform=\"rotate(-90 18 " + num((kTop + kBottom) / 2) + ")\"");
}

Axis linear_axis(double lo, double hi, double px_lo, double px_hi) {
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  Axis a;
  a.mode = AxisMode::Hz;
  a.lo = lo;
  a.hi = hi;
  a.px_lo = px_lo;
  a.px_hi = px_hi;
  return a;
}

std::string axis_caption(AxisMode mode) { return mode == AxisMode::Midi ? "MIDI note" : "Frequency (Hz)"; }

const AnalysisReport& need_report(const PlotRequest& r) {
  if (!r.report) throw std::invalid_argument("plot needs an analysis report");
  return *r.report;
}

const FrameRecord& pick_record(const PlotRequest& r) {
  const AnalysisReport& report = need_report(r);
  if (report.records.empty()) throw std::invalid_argument("analysis report has no records");
  const std::size_t i = r.record.value_or(report.records.size() / 2);
  if (i >= report.records.size()) throw std::invalid_argument("record index out of range");
  return report.records[i];
}

std::pair<double, double> partial_range(const std::vector<FrameRecord>& records) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const FrameRecord& r : records)
    for (const Partial& p : r.partials) {
      lo = std::min(lo, p.freq);
      hi = std::max(hi, p.freq);
    }
  return {lo, hi};
}

const Spectrum* nearest_spectrum(const std::vector<Spectrum>* spectra, double time) {
  if (!spectra || spectra->empty()) return nullptr;
  const Spectrum* best = &spectra->front();
  for (const Spectrum& s : *spectra)
    if (std::abs(s.frame_time - time) < std::abs(best->frame_time - time)) best = &s;
  return best;
}

std::string spectrogram_overlay(const PlotRequest& req) {
  const AnalysisReport& report = need_report(req);
  const bool have_spectra = req.spectra && !req.spectra->empty();
  if (report.records.empty() && !have_spectra) throw std::invalid_argument("nothing to plot: no records and no spectra");

  double t_end = report.duration_s;
  for (const FrameRecord& r : report.records) t_end = std::max(t_end, r.time_s);
  if (have_spectra) t_end = std::max(t_end, req.spectra->back().frame_time);
  if (!(t_end > 0.0)) t_end = 1.0;
  auto [f_lo, f_hi] = partial_range(report.records);
  if (report.records.empty()) f_lo = 50.0, f_hi = 2000.0;
  const Axis freq = Axis::for_frequencies(req.axis, std::max(20.0, f_lo / 1.5), f_hi * 1.2, kBottom, kTop);
  const Axis time = linear_axis(0.0, t_end, kLeft, kRight);

  Svg svg(req.title.empty() ? "Spectrogram with partial overlay" : req.title, "spectrogram_overlay");
  svg.rect(kLeft, kTop, kRight - kLeft, kBottom - kTop, "black");
  if (have_spectra) {
    const auto& spectra = *req.spectra;
    double global = 0.0;
    for (const Spectrum& s : spectra) global = std::max(global, s.power.maxCoeff());
    constexpr int kRows = 160;
    const std::size_t columns = std::min<std::size_t>(spectra.size(), 600);
    const double col_w = (kRight - kLeft) / double(columns);
    const double row_h = (kBottom - kTop) / double(kRows);
    for (std::size_t c = 0; c < columns && global > 0.0; ++c) {
      const Spectrum& s = spectra[c * spectra.size() / columns];
      const double bin = s.bin_hz();
      for (int row = 0; row < kRows; ++row) {
        const double v0 = freq.lo + (freq.hi - freq.lo) * row / kRows;
        const double v1 = freq.lo + (freq.hi - freq.lo) * (row + 1) / kRows;
        const double h0 = freq.mode == AxisMode::Midi ? midi_to_hz(v0) : v0;
        const double h1 = freq.mode == AxisMode::Midi ? midi_to_hz(v1) : v1;
        auto k0 = Eigen::Index(std::floor(h0 / bin)), k1 = Eigen::Index(std::ceil(h1 / bin));
        k0 = std::clamp<Eigen::Index>(k0, 0, s.power.size() - 1);
        k1 = std::clamp<Eigen::Index>(k1, k0, s.power.size() - 1);
        const double p = s.power.segment(k0, k1 - k0 + 1).maxCoeff();
        const double db = 10.0 * std::log10(std::max(p / global, 1e-12));
        if (db < -80.0) continue;
        const int level = int(std::lround(255.0 * (db + 80.0) / 80.0));
        char fill[16];
        std::snprintf(fill, sizeof fill, "#%02x%02x%02x", level, level, level);
        svg.rect(kLeft + c * col_w, kBottom - (row + 1) * row_h, col_w + 0.05, row_h + 0.05, fill);
      }
    }
  }
  for (const FrameRecord& r : report.records)
    for (const Partial& p : r.partials)
      svg.circle(time.map_value(r.time_s), freq.map(p.freq), 2.0, kYellow, " class=\"partial\"");
  std::vector<std::pair<double, double>> track;
  for (const FrameRecord& r : report.records) track.emplace_back(time.map_value(r.time_s), freq.map(r.diff_median_hz));
  svg.polyline(track, kBlue, 2.0, " class=\"diff-median\"");
  x_axis(svg, time, "Time (s)");
  y_axis(svg, freq, axis_caption(req.axis));
  svg.text(kRight, kTop - 8, "yellow: partials, blue: median difference", "end", 10);
  return svg.finish();
}

std::string spectrum_frame(const PlotRequest& req) {
  const FrameRecord& rec = pick_record(req);
  if (rec.partials.empty()) throw std::invalid_argument("record has no partials");
  const double f_lo = rec.partials.front().freq, f_hi = rec.partials.back().freq;
  const Axis freq = Axis::for_frequencies(req.axis, std::max(20.0, f_lo / 2.0), f_hi * 1.15, kLeft, kRight);
  const Spectrum* spectrum = nearest_spectrum(req.spectra, rec.time_s);

  double top = -std::numeric_limits<double>::infinity();
  for (const Partial& p : rec.partials) top = std::max(top, 10.0 * std::log10(std::max(p.power, 1e-30)));
  if (spectrum) top = std::max(top, 10.0 * std::log10(std::max(spectrum->power.maxCoeff(), 1e-30)));
  const Axis level = linear_axis(top - 100.0, top + 5.0, kBottom, kTop);

  char title[96];
  std::snprintf(title, sizeof title, "Power spectrum at %.3f s", rec.time_s);
  Svg svg(req.title.empty() ? title : req.title, "spectrum_frame");
  x_axis(svg, freq, axis_caption(req.axis));
  y_axis(svg, level, "Power (dB)");

  if (rec.diff_median_hz > 0.0) {
    for (int n = 1; n * rec.diff_median_hz <= f_hi * 1.15; ++n) {
      const double hz = n * rec.diff_median_hz;
      if (hz < std::max(20.0, f_lo / 2.0)) continue;
      svg.line(freq.map(hz), kTop, freq.map(hz), kBottom, "#999999", 0.8,
               " stroke-dasharray=\"4,3\" class=\"diff-multiple\"");
    }
  }
  if (spectrum) {
    std::vector<std::pair<double, double>> pts;
    const int columns = int(kRight - kLeft);
    for (int c = 0; c < columns; ++c) {
      const double v0 = freq.lo + (freq.hi - freq.lo) * c / columns;
      const double v1 = freq.lo + (freq.hi - freq.lo) * (c + 1) / columns;
      const double h0 = freq.mode == AxisMode::Midi ? midi_to_hz(v0) : v0;
      const double h1 = freq.mode == AxisMode::Midi ? midi_to_hz(v1) : v1;
      const double bin = spectrum->bin_hz();
      auto k0 = std::clamp<Eigen::Index>(Eigen::Index(std::floor(h0 / bin)), 0, spectrum->power.size() - 1);
      auto k1 = std::clamp<Eigen::Index>(Eigen::Index(std::ceil(h1 / bin)), k0, spectrum->power.size() - 1);
      const double db = 10.0 * std::log10(std::max(spectrum->power.segment(k0, k1 - k0 + 1).maxCoeff(), 1e-30));
      pts.emplace_back(kLeft + c + 0.5, std::clamp(level.map_value(db), kTop, kBottom));
    }
    svg.polyline(pts, "#333333", 1.0, " class=\"spectrum\"");
  } else {
    for (const Partial& p : rec.partials) {
      const double db = 10.0 * std::log10(std::max(p.power, 1e-30));
      svg.line(freq.map(p.freq), kBottom, freq.map(p.freq), std::clamp(level.map_value(db), kTop, kBottom), "#333333");
    }
  }
  const double lowest = rec.partials.front().freq;
  svg.line(freq.map(lowest), kTop, freq.map(lowest), kBottom, kBlue, 2.0,
           " class=\"lowest-partial\" data-hz=\"" + num(lowest) + "\"");
  for (const Partial& p : rec.partials) {
    const double db = 10.0 * std::log10(std::max(p.power, 1e-30));
    svg.circle(freq.map(p.freq), std::clamp(level.map_value(db), kTop, kBottom), 3.5, kYellow,
               " stroke=\"black\" stroke-width=\"0.5\" class=\"partial\"");
  }
  return svg.finish();
}

std::string diff_distribution(const PlotRequest& req) {
  const AnalysisReport& report = need_report(req);
  if (report.records.empty()) throw std::invalid_argument("analysis report has no records");
  std::vector<double> values;
  for (const FrameRecord& r : report.records)
    values.push_back(req.axis == AxisMode::Midi ? r.diff_median_midi : r.diff_median_hz);
  const double width = req.axis == AxisMode::Midi ? 0.1 : 1.0;  // 10 cents or 1 Hz
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double first = (std::floor(*lo_it / width + 0.5) - 5.0) * width;
  const auto bins = std::size_t(std::floor(*hi_it / width + 0.5) - std::floor(*lo_it / width + 0.5)) + 11;
  std::vector<int> counts(bins, 0);
  for (double v : values) ++counts[std::size_t(std::floor(v / width + 0.5) - std::floor(first / width + 0.5))];
  const int most = *std::max_element(counts.begin(), counts.end());

  Axis x;
  x.mode = req.axis;
  x.lo = first - 0.5 * width;
  x.hi = first + (double(bins) - 0.5) * width;
  x.px_lo = kLeft;
  x.px_hi = kRight;
  const Axis y = linear_axis(0.0, most * 1.1, kBottom, kTop);

  Svg svg(req.title.empty() ? "Distribution of median partial differences" : req.title, "diff_distribution");
  x_axis(svg, x, req.axis == AxisMode::Midi ? "Median difference (MIDI note)" : "Median difference (Hz)");
  y_axis(svg, y, "Frames");
  for (std::size_t b = 0; b < bins; ++b) {
    if (counts[b] == 0) continue;
    const double centre = first + double(b) * width;
    const double x0 = x.map_value(centre - 0.5 * width), x1 = x.map_value(centre + 0.5 * width);
    const double top = y.map_value(counts[b]);
    svg.rect(x0, top, x1 - x0, kBottom - top, kBlue,
             " class=\"bar\" data-center=\"" + num(centre) + "\" data-count=\"" + std::to_string(counts[b]) + "\"");
  }
  if (report.summary.distribution_peak && req.axis == AxisMode::Midi) {
    const DistributionPeak& p = *report.summary.distribution_peak;
    const double px = x.map_value(p.midi);
    svg.line(px, kTop, px, kBottom, "#d62728", 1.0, " stroke-dasharray=\"3,3\" class=\"peak\"");
    char note[64];
    std::snprintf(note, sizeof note, "peak %s %+.1f cents", p.name.c_str(), p.cents);
    svg.text(px + 4, kTop + 12, note, "start", 11);
  }
  return svg.finish();
}

std::string sweep_curves(const PlotRequest& req) {
  if (!req.sweep || req.sweep->empty()) throw std::invalid_argument("sweep_curves needs sweep rows");
  std::vector<const SweepRow*> rows;
  for (const SweepRow& r : *req.sweep)
    if (r.valid) rows.push_back(&r);
  if (rows.empty()) throw std::invalid_argument("sweep has no valid rows");

  struct Series {
    const char* name;
    double SweepRow::*field;
    const char* color;
  };
  const std::array<Series, 5> series{{{"f0_partial_hz", &SweepRow::f0_partial_hz, "#000000"},
                                      {"autocorr_hz", &SweepRow::autocorr_hz, "#d62728"},
                                      {"diff_median_hz", &SweepRow::diff_median_hz, kBlue},
                                      {"diff_mean_hz", &SweepRow::diff_mean_hz, "#2ca02c"},
                                      {"first_pair_diff_hz", &SweepRow::first_pair_diff_hz, "#9467bd"}}};
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const SweepRow* r : rows)
    for (const Series& s : series) {
      lo = std::min(lo, r->*s.field);
      hi = std::max(hi, r->*s.field);
    }
  const Axis x = linear_axis(rows.front()->g_hz, rows.back()->g_hz, kLeft, kRight - 170);
  const Axis y = Axis::for_frequencies(req.axis, lo * 0.97, hi * 1.03, kBottom, kTop);

  Svg svg(req.title.empty() ? "Pitch estimates across the overtone sweep" : req.title, "sweep_curves");
  x_axis(svg, x, "Overtone spacing g (Hz)");
  y_axis(svg, y, req.axis == AxisMode::Midi ? "Estimate (MIDI note)" : "Estimate (Hz)");
  double legend_y = kTop + 10;
  for (const Series& s : series) {
    std::vector<std::pair<double, double>> pts;
    for (const SweepRow* r : rows) pts.emplace_back(x.map_value(r->g_hz), y.map(r->*s.field));
    svg.polyline(pts, s.color, 1.8, std::string(" class=\"series\" data-series=\"") + s.name + "\"");
    svg.line(kRight - 160, legend_y, kRight - 135, legend_y, s.color, 2.0);
    svg.text(kRight - 130, legend_y + 4, s.name, "start", 11, " class=\"legend\"");
    legend_y += 18;
  }
  return svg.finish();
}

std::string shift_diagram(const PlotRequest& req) {
  const FrameRecord& rec = pick_record(req);
  if (rec.partials.size() < 3) throw std::invalid_argument("shift_diagram needs at least three partials");
  const PartialFrame frame = make_frame(rec.partials, rec.time_s);
  std::optional<ShiftEstimate> shift;
  try {
    shift = estimate_shift(frame);
  } catch (const std::exception&) {
  }
  const double d = shift ? shift->d : rec.diff_median_hz;
  const double s = shift ? shift->s : 0.0;
  const double f_hi = rec.partials.back().freq * 1.1;
  const Axis freq = Axis::for_frequencies(req.axis, std::max(20.0, std::min(rec.partials.front().freq, d) / 1.5), f_hi,
                                          kLeft, kRight);

  char title[128];
  std::snprintf(title, sizeof title, "Partials against n*d + s (d = %.2f Hz, s = %.2f Hz) at %.3f s", d, s, rec.time_s);
  Svg svg(req.title.empty() ? title : req.title, "shift_diagram");
  x_axis(svg, freq, axis_caption(req.axis));
  const double rows[3] = {100, 190, 280};
  svg.text(kLeft + 4, rows[0] - 34, "observed partials", "start", 11);
  svg.text(kLeft + 4, rows[1] - 34, "grid n*d + s", "start", 11);
  svg.text(kLeft + 4, rows[2] - 34, "harmonics n*d", "start", 11);
  for (const Partial& p : rec.partials)
    svg.line(freq.map(p.freq), rows[0] - 25, freq.map(p.freq), rows[0] + 25, "#c89b00", 3.0,
             " class=\"partial\" data-hz=\"" + num(p.freq) + "\"");
  for (int n = 1; n * d + s <= f_hi && d > 0.0; ++n) {
    const double g = n * d + s;
    svg.line(freq.map(g), rows[1] - 25, freq.map(g), rows[1] + 25, kBlue, 2.0, " class=\"grid-point\"");
    const double h = n * d;
    svg.line(freq.map(h), rows[2] - 25, freq.map(h), rows[2] + 25, "#888888", 2.0, " class=\"harmonic\"");
  }
  svg.line(freq.map(rec.partials.front().freq), kTop, freq.map(rec.partials.front().freq), kBottom, kBlue, 1.0,
           " stroke-dasharray=\"2,3\" class=\"lowest-partial\"");
  return svg.finish();
}

}  // namespace

std::string render_plot(const PlotRequest& request) {
  switch (request.kind) {
    case PlotKind::SpectrogramOverlay: return spectrogram_overlay(request);
    case PlotKind::SpectrumFrame: return spectrum_frame(request);
    case PlotKind::DiffDistribution: return diff_distribution(request);
    case PlotKind::SweepCurves: return sweep_curves(request);
    case PlotKind::ShiftDiagram: return shift_diagram(request);
  }
  throw std::invalid_argument("unknown plot kind");
}

}  // namespace inharm
