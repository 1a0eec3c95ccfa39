#include "inharm/report.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include <json.hpp>

#include "inharm/loudness.hpp"
#include "inharm/stats.hpp"
#include "inharm/units.hpp"

namespace inharm {

using nlohmann::json;

std::string note_name(int midi) {
  static constexpr std::array<const char*, 12> names{"C", "C#", "D", "D#", "E", "F", "F#", "G", "G#", "A", "A#", "B"};
  const int pc = ((midi % 12) + 12) % 12;
  const int octave = (midi - pc) / 12 - 1;
  return std::string(names[std::size_t(pc)]) + std::to_string(octave);
}

std::optional<DistributionPeak> distribution_peak(const std::vector<double>& midi_values) {
  if (midi_values.empty()) return std::nullopt;
  const auto [lo_it, hi_it] = std::minmax_element(midi_values.begin(), midi_values.end());
  // Histogram in cents, padded by four sigma of the smoothing kernel.
  constexpr double kSigma = 5.0;
  const double origin = std::floor(*lo_it * 100.0) - 4.0 * kSigma;
  const auto bins = std::size_t(std::ceil(*hi_it * 100.0 - origin + 4.0 * kSigma)) + 1;
  std::vector<double> counts(bins, 0.0);
  for (double m : midi_values) counts[std::size_t(std::lround(m * 100.0 - origin))] += 1.0;

  const int half = int(4.0 * kSigma);
  std::vector<double> kernel(std::size_t(2 * half + 1));
  for (int i = -half; i <= half; ++i) kernel[std::size_t(i + half)] = std::exp(-0.5 * (i / kSigma) * (i / kSigma));
  std::size_t best = 0;
  double best_value = -1.0;
  for (std::size_t b = 0; b < bins; ++b) {
    double acc = 0.0;
    for (int i = -half; i <= half; ++i) {
      const auto j = std::ptrdiff_t(b) + i;
      if (j >= 0 && j < std::ptrdiff_t(bins)) acc += counts[std::size_t(j)] * kernel[std::size_t(i + half)];
    }
    if (acc > best_value) {
      best_value = acc;
      best = b;
    }
  }
  DistributionPeak peak;
  peak.midi = (origin + double(best)) / 100.0;
  peak.note = int(std::lround(peak.midi));
  peak.cents = std::round((peak.midi - peak.note) * 100.0 * 1e6) / 1e6;
  peak.name = note_name(peak.note);
  return peak;
}

AnalysisReport analyze_buffer(const AudioBuffer& audio, const AnalysisSettings& settings, std::string input_name) {
  audio.validate();
  settings.frame.validate();
  settings.thresholds.validate();
  AnalysisReport report;
  report.input = std::move(input_name);
  report.sample_rate = audio.sample_rate;
  report.duration_s = audio.duration();
  report.settings = settings;

  std::optional<LoudnessContour> contour;
  if (settings.weighting)
    contour = settings.contour_csv.empty() ? LoudnessContour::iso226(settings.phon)
                                           : LoudnessContour::from_csv(settings.contour_csv);
  const std::vector<Spectrum> spectra = stft(audio, settings.frame, contour);
  std::vector<PartialFrame> frames;
  if (!spectra.empty()) frames = track_partials(spectra, settings.tracking);

  for (const PartialFrame& frame : frames) {
    if (!frame.reliable) continue;
    FrameRecord r;
    r.time_s = frame.time;
    r.partials = frame.partials;
    r.anchored = frame.anchored;
    const DiffStats stats = diff_stats(frame, settings.thresholds.outlier_cents);
    r.diff_median_hz = stats.weighted_median;
    r.diff_median_midi = hz_to_midi(stats.weighted_median);
    r.diff_mad_cents = stats.mad_cents;
    r.f0_least_dev_hz = estimate_f0_least_deviating(frame).f0;
    if (frame.partials.size() >= 4) r.classification = classify_tone(frame, settings.thresholds);
    report.records.push_back(std::move(r));
  }
  report.summary = summarize(report.records, frames.size());
  return report;
}

ReportSummary summarize(const std::vector<FrameRecord>& records, std::size_t frames_total) {
  ReportSummary s;
  s.frames_total = frames_total;
  s.frames_analyzed = records.size();
  s.no_tonal_content = records.empty();
  if (records.empty()) return s;

  std::map<ToneKind, std::size_t> votes;
  for (const FrameRecord& r : records)
    if (r.classification) ++votes[r.classification->kind];
  if (!votes.empty()) {
    auto best = votes.begin();
    for (auto it = votes.begin(); it != votes.end(); ++it)
      if (it->second > best->second) best = it;
    s.modal_classification = std::string(to_string(best->first));
  }

  Eigen::ArrayXd medians(Eigen::Index(records.size()));
  std::vector<double> midi;
  for (std::size_t i = 0; i < records.size(); ++i) {
    medians(Eigen::Index(i)) = records[i].diff_median_hz;
    midi.push_back(records[i].diff_median_midi);
  }
  s.median_diff_median_hz = median(medians);
  s.distribution_peak = distribution_peak(midi);
  return s;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

json settings_to_json(const AnalysisSettings& s) {
  const PeakConfig& p = s.tracking.peaks;
  const Thresholds& t = s.thresholds;
  return {{"frame",
           {{"window_size", s.frame.window_size},
            {"hop_size", s.frame.hop_size},
            {"window", std::string(to_string(s.frame.window_kind))},
            {"zero_pad", s.frame.zero_pad}}},
          {"weighting", {{"enabled", s.weighting}, {"phon", s.phon}, {"contour_csv", s.contour_csv}}},
          {"peaks",
           {{"floor_db", p.floor_db},
            {"max_peaks", p.max_peaks},
            {"min_separation_cents", p.min_separation_cents},
            {"noise_margin_db", p.noise_margin_db}}},
          {"tracking",
           {{"max_partials", s.tracking.max_partials},
            {"tol_cents", s.tracking.tol_cents},
            {"max_delta_cents", s.tracking.max_delta_cents}}},
          {"thresholds",
           {{"tight_cents", t.tight_cents},
            {"outlier_cents", t.outlier_cents},
            {"jitter_cents", t.jitter_cents},
            {"noisy_max_cents", t.noisy_max_cents},
            {"loose_cents", t.loose_cents}}}};
}

AnalysisSettings settings_from_json(const json& j) {
  AnalysisSettings s;
  const json& f = j.at("frame");
  s.frame.window_size = f.at("window_size");
  s.frame.hop_size = f.at("hop_size");
  s.frame.window_kind = parse_window_kind(f.at("window").get<std::string>());
  s.frame.zero_pad = f.at("zero_pad");
  const json& w = j.at("weighting");
  s.weighting = w.at("enabled");
  s.phon = w.at("phon");
  s.contour_csv = w.at("contour_csv");
  const json& p = j.at("peaks");
  s.tracking.peaks = {p.at("floor_db"), p.at("max_peaks"), p.at("min_separation_cents"), p.at("noise_margin_db")};
  const json& t = j.at("tracking");
  s.tracking.max_partials = t.at("max_partials");
  s.tracking.tol_cents = t.at("tol_cents");
  s.tracking.max_delta_cents = t.at("max_delta_cents");
  for (const auto& [key, value] : j.at("thresholds").items()) s.thresholds.set(key, value.get<double>());
  return s;
}

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

std::string report_to_json(const AnalysisReport& report) {
  json records = json::array();
  for (const FrameRecord& r : report.records) {
    json partials = json::array();
    for (const Partial& p : r.partials)
      partials.push_back({{"freq_hz", p.freq}, {"midi", p.midi}, {"cents_dev", p.cents_dev}, {"power", p.power}});
    json cls = nullptr;
    if (r.classification) {
      const ToneClassification& c = *r.classification;
      cls = {{"kind", std::string(to_string(c.kind))},
             {"regularity", std::string(to_string(c.regularity))},
             {"d_hz", c.spacing_d},
             {"s_hz", c.shift_s},
             {"jitter_cents", c.jitter_cents},
             {"octave_adjusted", c.octave_adjusted}};
    }
    records.push_back({{"time_s", r.time_s},
                       {"anchored", r.anchored},
                       {"partials", partials},
                       {"diff_median_hz", r.diff_median_hz},
                       {"diff_median_midi", r.diff_median_midi},
                       {"diff_mad_cents", r.diff_mad_cents},
                       {"f0_least_dev_hz", r.f0_least_dev_hz},
                       {"classification", cls}});
  }
  const ReportSummary& s = report.summary;
  json peak = nullptr;
  if (s.distribution_peak)
    peak = {{"midi", s.distribution_peak->midi},
            {"note", s.distribution_peak->note},
            {"note_name", s.distribution_peak->name},
            {"cents", s.distribution_peak->cents}};
  json summary = {{"frames_total", s.frames_total},
                  {"frames_analyzed", s.frames_analyzed},
                  {"no_tonal_content", s.no_tonal_content},
                  {"modal_classification", s.modal_classification ? json(*s.modal_classification) : json(nullptr)},
                  {"median_diff_median_hz", optional_number(s.median_diff_median_hz)},
                  {"distribution_peak", peak}};
  json doc = {{"tool", {{"name", "inharm"}, {"version", kToolVersion}}},
              {"input", {{"path", report.input}, {"sample_rate", report.sample_rate}, {"duration_s", report.duration_s}}},
              {"settings", settings_to_json(report.settings)},
              {"records", records},
              {"summary", summary}};
  return doc.dump(2) + "\n";
}

AnalysisReport report_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    AnalysisReport report;
    report.input = doc.at("input").at("path");
    report.sample_rate = doc.at("input").at("sample_rate");
    report.duration_s = doc.at("input").at("duration_s");
    report.settings = settings_from_json(doc.at("settings"));
    for (const json& jr : doc.at("records")) {
      FrameRecord r;
      r.time_s = jr.at("time_s");
      r.anchored = jr.at("anchored");
      for (const json& jp : jr.at("partials")) {
        Partial p;
        p.freq = jp.at("freq_hz");
        p.midi = jp.at("midi");
        p.cents_dev = jp.at("cents_dev");
        p.power = jp.at("power");
        r.partials.push_back(p);
      }
      r.diff_median_hz = jr.at("diff_median_hz");
      r.diff_median_midi = jr.at("diff_median_midi");
      r.diff_mad_cents = jr.at("diff_mad_cents");
      r.f0_least_dev_hz = jr.at("f0_least_dev_hz");
      const json& jc = jr.at("classification");
      if (!jc.is_null()) {
        ToneClassification c;
        c.kind = parse_tone_kind(jc.at("kind").get<std::string>());
        const std::string reg = jc.at("regularity");
        c.regularity = reg == "stretched" ? Regularity::Stretched
                       : reg == "compressed" ? Regularity::Compressed
                                             : Regularity::None;
        c.spacing_d = jc.at("d_hz");
        c.shift_s = jc.at("s_hz");
        c.jitter_cents = jc.at("jitter_cents");
        c.octave_adjusted = jc.at("octave_adjusted");
        r.classification = c;
      }
      report.records.push_back(std::move(r));
    }
    report.summary = summarize(report.records, doc.at("summary").at("frames_total").get<std::size_t>());
    return report;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed analysis report: ") + e.what());
  }
}

std::string report_partials_csv(const AnalysisReport& report) {
  std::string out = "time_s,freq_hz,midi,cents_dev,power\n";
  char line[160];
  for (const FrameRecord& r : report.records)
    for (const Partial& p : r.partials) {
      std::snprintf(line, sizeof line, "%.6f,%.4f,%.4f,%.2f,%.6e\n", r.time_s, p.freq, p.midi, p.cents_dev, p.power);
      out += line;
    }
  return out;
}

}  // namespace inharm
