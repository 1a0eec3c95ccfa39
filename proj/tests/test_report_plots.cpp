#include <doctest.h>

#include <map>
#include <random>
#include <regex>
#include <sstream>

#include "inharm/plots.hpp"
#include "inharm/report.hpp"
#include "inharm/synth.hpp"
#include "inharm/units.hpp"
#include "test_support.hpp"

using namespace inharm;
using namespace inharm::test;

namespace {

ToneSpec grid_tone() {
  ToneSpec s;
  s.model = RegularGrid{55.0, 7.0};
  s.n_partials = 20;
  return s;
}

ToneSpec harmonic_tone(double f0, int n) {
  ToneSpec s;
  s.f0 = f0;
  s.n_partials = n;
  s.amplitudes.kind = AmplitudeProfile::Kind::Reciprocal;
  return s;
}

std::vector<double> attribute_values(const std::string& svg, const std::string& element_pattern,
                                     const std::string& attribute) {
  std::vector<double> out;
  const std::regex element(element_pattern);
  const std::regex attr(attribute + "=\"([-0-9.]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), element); it != std::sregex_iterator(); ++it) {
    const std::string tag = it->str();
    std::smatch m;
    if (std::regex_search(tag, m, attr)) out.push_back(std::stod(m[1]));
  }
  return out;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

FrameRecord record_with(double time, double diff_hz, std::optional<ToneKind> kind) {
  FrameRecord r;
  r.time_s = time;
  r.diff_median_hz = diff_hz;
  r.diff_median_midi = hz_to_midi(diff_hz);
  r.partials = {Partial::at(diff_hz, 1.0), Partial::at(2 * diff_hz, 0.5), Partial::at(3 * diff_hz, 0.3)};
  if (kind) {
    ToneClassification c;
    c.kind = *kind;
    c.spacing_d = diff_hz;
    r.classification = c;
  }
  return r;
}

}  // namespace

TEST_CASE("note names") {
  CHECK(note_name(69) == "A4");
  CHECK(note_name(60) == "C4");
  CHECK(note_name(61) == "C#4");
  CHECK(note_name(33) == "A1");
  CHECK(note_name(0) == "C-1");
  CHECK(note_name(127) == "G9");
  CHECK(note_name(58) == "A#3");
}

TEST_CASE("distribution peak finds the dense cluster") {
  CHECK_FALSE(distribution_peak({}).has_value());
  std::mt19937_64 rng(3);
  std::normal_distribution<double> tight(33.0, 0.01), wide(45.0, 0.5);
  std::vector<double> values;
  for (int i = 0; i < 60; ++i) values.push_back(tight(rng));
  for (int i = 0; i < 40; ++i) values.push_back(wide(rng));
  const auto p = distribution_peak(values);
  REQUIRE(p);
  CHECK(p->note == 33);
  CHECK(p->name == "A1");
  CHECK(std::abs(p->cents) <= 3.0);
  CHECK(p->cents == doctest::Approx((p->midi - 33.0) * 100.0));

  const auto single = distribution_peak({69.123});
  REQUIRE(single);
  CHECK(single->midi == doctest::Approx(69.12).epsilon(1e-9));
  CHECK(single->name == "A4");
}

TEST_CASE("analyze_buffer on a shifted grid tone") {
  const AnalysisReport r = analyze_buffer(render(grid_tone(), 44100), AnalysisSettings{}, "grid.wav");
  CHECK(r.input == "grid.wav");
  CHECK(r.sample_rate == 44100);
  REQUIRE_FALSE(r.records.empty());
  CHECK(r.summary.frames_analyzed == r.records.size());
  CHECK(r.summary.frames_total >= r.records.size());
  CHECK_FALSE(r.summary.no_tonal_content);
  REQUIRE(r.summary.distribution_peak);
  CHECK(std::abs(r.summary.distribution_peak->midi - 33.0) * 100.0 <= 10.0);
  REQUIRE(r.summary.modal_classification);
  CHECK(*r.summary.modal_classification == "type2_regular");
  for (const FrameRecord& rec : r.records) {
    CHECK(rec.partials.size() >= 3);
    CHECK(rec.diff_median_midi == doctest::Approx(hz_to_midi(rec.diff_median_hz)));
  }
}

TEST_CASE("analyze_buffer: harmonic tone and silence") {
  const AnalysisReport h = analyze_buffer(render(harmonic_tone(110.0, 12), 44100), AnalysisSettings{});
  REQUIRE(h.summary.modal_classification);
  CHECK(*h.summary.modal_classification == "harmonic");
  REQUIRE(h.summary.median_diff_median_hz);
  CHECK(std::abs(*h.summary.median_diff_median_hz - 110.0) <= 0.5);

  const AnalysisReport quiet = analyze_buffer(AudioBuffer{Eigen::ArrayXd::Zero(44100), 44100}, AnalysisSettings{});
  CHECK(quiet.records.empty());
  CHECK(quiet.summary.no_tonal_content);
  CHECK(quiet.summary.frames_analyzed == 0);
  CHECK_FALSE(quiet.summary.modal_classification);
  CHECK_FALSE(quiet.summary.distribution_peak);
}

TEST_CASE("summary is a function of the records") {
  std::vector<FrameRecord> records{record_with(0.1, 100, ToneKind::Type2Regular), record_with(0.2, 110, ToneKind::Harmonic),
                                   record_with(0.3, 105, ToneKind::Type2Regular), record_with(0.4, 103, std::nullopt),
                                   record_with(0.5, 120, ToneKind::Type1ShiftedResidue)};
  const ReportSummary s = summarize(records, 9);
  CHECK(s.frames_total == 9);
  CHECK(s.frames_analyzed == 5);
  CHECK_FALSE(s.no_tonal_content);
  REQUIRE(s.modal_classification);
  CHECK(*s.modal_classification == "type2_regular");
  REQUIRE(s.median_diff_median_hz);
  CHECK(*s.median_diff_median_hz == 105.0);
  CHECK(summarize({}, 4).no_tonal_content);

  // The same records always give the same summary, whatever else the report holds.
  AnalysisReport report;
  report.records = records;
  report.summary = summarize(records, 9);
  CHECK(report_to_json(report) == report_to_json(report_from_json(report_to_json(report))));
}

TEST_CASE("report json round trip and partial csv") {
  AnalysisSettings settings;
  settings.phon = 40.0;
  settings.thresholds.tight_cents = 12.0;
  const AnalysisReport r = analyze_buffer(render(harmonic_tone(147.0, 8), 44100), settings, "h.wav");
  const std::string text = report_to_json(r);
  const AnalysisReport back = report_from_json(text);
  CHECK(report_to_json(back) == text);
  CHECK(back.settings.phon == 40.0);
  CHECK(back.settings.thresholds.tight_cents == 12.0);
  REQUIRE(back.records.size() == r.records.size());
  CHECK(back.records.front().partials.size() == r.records.front().partials.size());
  CHECK_THROWS_AS(report_from_json("{}"), std::invalid_argument);
  CHECK_THROWS_AS(report_from_json("not json"), std::invalid_argument);

  const std::string csv = report_partials_csv(r);
  CHECK(csv.substr(0, csv.find('\n')) == "time_s,freq_hz,midi,cents_dev,power");
  std::size_t partials = 0;
  for (const FrameRecord& rec : r.records) partials += rec.partials.size();
  CHECK(count_of(csv, "\n") == partials + 1);
}

TEST_CASE("axis mapping") {
  const Axis hz = Axis::for_frequencies(AxisMode::Hz, 100.0, 1100.0, 0.0, 1000.0);
  CHECK(hz.map(100.0) == doctest::Approx(0.0));
  CHECK(hz.map(600.0) == doctest::Approx(500.0));
  const Axis midi = Axis::for_frequencies(AxisMode::Midi, 220.0, 880.0, 0.0, 240.0);
  CHECK(midi.value(440.0) == doctest::Approx(69.0));
  CHECK(midi.map(440.0) == doctest::Approx(120.0));
  const auto grid = midi.gridlines();
  CHECK(std::find(grid.begin(), grid.end(), 69.0) != grid.end());
  for (double g : grid) CHECK(g == std::round(g));
  CHECK(parse_axis_mode("midi") == AxisMode::Midi);
  CHECK_THROWS_AS(parse_axis_mode("bark"), std::invalid_argument);
}

TEST_CASE("plots from an analysis report") {
  const AudioBuffer audio = render(grid_tone(), 44100);
  AnalysisSettings settings;
  const AnalysisReport report = analyze_buffer(audio, settings);
  const auto spectra = stft(audio, settings.frame);

  for (PlotKind kind : {PlotKind::SpectrogramOverlay, PlotKind::SpectrumFrame, PlotKind::DiffDistribution,
                        PlotKind::ShiftDiagram}) {
    for (AxisMode axis : {AxisMode::Hz, AxisMode::Midi}) {
      PlotRequest req;
      req.kind = kind;
      req.axis = axis;
      req.report = &report;
      req.spectra = &spectra;
      const std::string svg = render_plot(req);
      CHECK(svg.rfind("<?xml", 0) == 0);
      CHECK(svg.find("<svg xmlns=\"http://www.w3.org/2000/svg\"") != std::string::npos);
      CHECK(svg.find("data-kind=\"" + std::string(to_string(kind)) + "\"") != std::string::npos);
      CHECK(svg.substr(svg.size() - 7) == "</svg>\n");
      CHECK(render_plot(req) == svg);
    }
    PlotRequest empty_req;
    empty_req.kind = kind;
    CHECK_THROWS_AS(render_plot(empty_req), std::invalid_argument);
    AnalysisReport empty;
    empty_req.report = &empty;
    CHECK_THROWS_AS(render_plot(empty_req), std::invalid_argument);
  }
  CHECK(parse_plot_kind("shift_diagram") == PlotKind::ShiftDiagram);
  CHECK_THROWS_AS(parse_plot_kind("waterfall"), std::invalid_argument);
}

TEST_CASE("spectrum frame marks the lowest partial in blue at its mapped position") {
  const AudioBuffer audio = render(harmonic_tone(220.0, 10), 44100);
  const AnalysisReport report = analyze_buffer(audio, AnalysisSettings{});
  REQUIRE_FALSE(report.records.empty());
  const auto spectra = stft(audio, AnalysisSettings{}.frame);
  PlotRequest req;
  req.kind = PlotKind::SpectrumFrame;
  req.axis = AxisMode::Midi;
  req.report = &report;
  req.spectra = &spectra;
  req.record = 0;
  const std::string svg = render_plot(req);

  const auto markers = attribute_values(svg, "<line[^>]*class=\"lowest-partial\"[^>]*>", "x1");
  REQUIRE(markers.size() == 1);
  CHECK(svg.find("class=\"lowest-partial\"") != std::string::npos);
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex("<line[^>]*stroke=\"(#[0-9a-f]{6})\"[^>]*class=\"lowest-partial\"")));
  const std::string blue = m[1];
  CHECK(blue.substr(5, 2) > blue.substr(1, 2));  // blue channel dominates
  CHECK(blue.substr(5, 2) > blue.substr(3, 2));

  // The marker sits between the gridlines of the notes around 220 Hz (A3 = 57).
  const double lowest = report.records.front().partials.front().freq;
  std::map<double, double> grid_x;
  const std::regex grid("<line x1=\"([-0-9.]+)\"[^>]*class=\"grid\" data-axis=\"x\" data-value=\"([-0-9.]+)\"");
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), grid); it != std::sregex_iterator(); ++it)
    grid_x[std::stod((*it)[2])] = std::stod((*it)[1]);
  REQUIRE(grid_x.count(57.0));
  REQUIRE(grid_x.size() >= 2);
  const double px_per_note = (grid_x.rbegin()->second - grid_x.begin()->second) /
                             (grid_x.rbegin()->first - grid_x.begin()->first);
  const double expect = grid_x[57.0] + (hz_to_midi(lowest) - 57.0) * px_per_note;
  CHECK(std::abs(markers.front() - expect) <= 0.02);
}

TEST_CASE("midi axis puts 440 Hz on the 69 gridline") {
  std::vector<SweepRow> rows;
  for (int i = 0; i < 5; ++i) {
    const double v = 400.0 + 20.0 * i;
    rows.push_back({v, v, v, v, v, v, true, {}});
  }
  PlotRequest req;
  req.kind = PlotKind::SweepCurves;
  req.axis = AxisMode::Midi;
  req.sweep = &rows;
  const std::string svg = render_plot(req);
  std::smatch m;
  REQUIRE(std::regex_search(svg, m, std::regex("<line x1=\"[-0-9.]+\" y1=\"([-0-9.]+)\"[^>]*data-axis=\"y\" data-value=\"69.00\"")));
  const double y69 = std::stod(m[1]);
  // Every series passes through (440, 440); the third point of each polyline.
  const std::regex series("<polyline[^>]*data-series=\"([a-z0-9_]+)\" points=\"([^\"]*)\"");
  std::vector<std::string> names;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), series); it != std::sregex_iterator(); ++it) {
    names.push_back((*it)[1]);
    std::istringstream pts((*it)[2]);
    std::string p;
    for (int k = 0; k < 3; ++k) pts >> p;
    CHECK(std::abs(std::stod(p.substr(p.find(',') + 1)) - y69) <= 0.02);
  }
  CHECK(names == std::vector<std::string>{"f0_partial_hz", "autocorr_hz", "diff_median_hz", "diff_mean_hz",
                                          "first_pair_diff_hz"});
  const std::string header(kSweepCsvHeader);
  for (const std::string& n : names) CHECK(header.find(n) != std::string::npos);
}

TEST_CASE("sweep plot needs valid rows") {
  PlotRequest req;
  req.kind = PlotKind::SweepCurves;
  CHECK_THROWS_AS(render_plot(req), std::invalid_argument);
  std::vector<SweepRow> rows{{220, 0, 0, 0, 0, 0, false, "x"}};
  req.sweep = &rows;
  CHECK_THROWS_AS(render_plot(req), std::invalid_argument);
}
