#include "inharm/commands.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "inharm/audio_io.hpp"
#include "inharm/loudness.hpp"
#include "inharm/metrics.hpp"
#include "inharm/synth.hpp"

namespace inharm {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return text.str();
}

bool to_stdout(const std::filesystem::path& path) { return path.empty() || path == "-"; }

}  // namespace

std::optional<std::filesystem::path> default_config_path() {
  const char* env = std::getenv("INHARM_CONFIG");
  if (!env || !*env) return std::nullopt;
  return std::filesystem::path(env);
}

void write_output(const std::filesystem::path& path, const std::string& content, std::ostream& out) {
  if (to_stdout(path)) {
    out << content;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError("cannot write " + path.string());
  file << content;
  if (!file) throw IoError("write failed for " + path.string());
}

void cmd_analyze(const AnalyzeOptions& options, std::ostream& out) {
  const AudioBuffer audio = load_wav(options.input);
  const AnalysisReport report = analyze_buffer(audio, options.settings, options.input.generic_string());
  write_output(options.json_out, report_to_json(report), out);
  if (!options.csv_out.empty()) write_output(options.csv_out, report_partials_csv(report), out);
  if (options.plots.empty()) return;

  std::optional<LoudnessContour> contour;
  if (options.settings.weighting)
    contour = options.settings.contour_csv.empty() ? LoudnessContour::iso226(options.settings.phon)
                                                   : LoudnessContour::from_csv(options.settings.contour_csv);
  const std::vector<Spectrum> spectra = stft(audio, options.settings.frame, contour);
  for (const auto& [kind, path] : options.plots) {
    PlotRequest request;
    request.kind = kind;
    request.axis = options.axis;
    request.report = &report;
    request.spectra = &spectra;
    write_output(path, render_plot(request), out);
  }
}

void cmd_synth(const SynthOptions& options, std::ostream& out) {
  const ToneSpec spec = load_tone_spec(options.spec);
  const AudioBuffer audio = render(spec, options.sample_rate);
  if (options.out.empty()) throw std::invalid_argument("synth needs an output WAV path");
  save_wav(audio, options.out);
  if (!options.table_csv.empty()) {
    std::string csv = "n,freq_hz,amplitude\n";
    char line[96];
    for (const PartialSpec& p : partial_table(spec, options.sample_rate)) {
      std::snprintf(line, sizeof line, "%d,%.6f,%.6f\n", p.n, p.hz, p.amplitude);
      csv += line;
    }
    write_output(options.table_csv, csv, out);
  }
}

void cmd_sweep(const SweepOptions& options, std::ostream& out) {
  const SweepConfig& config = options.config;
  ToneSpec base;
  base.amplitudes = config.amplitudes;
  base.duration_s = config.duration_s;
  base.level = config.level;
  base.phase_seed = config.phase_seed;
  std::vector<SweepRow> rows;
  int index = 0;
  for (const auto& [g, spec] : sweep_set(config.n_steps, config.n_partials, base)) {
    const AudioBuffer audio = render(spec, config.sample_rate);
    if (!options.wav_dir.empty()) {
      char name[32];
      std::snprintf(name, sizeof name, "sweep_%02d.wav", index);
      save_wav(audio, options.wav_dir / name);
    }
    rows.push_back(analyze_sweep_member(g, audio, config));
    ++index;
  }
  write_output(options.csv_out, sweep_csv(rows), out);
  if (!options.svg_out.empty()) {
    PlotRequest request;
    request.kind = PlotKind::SweepCurves;
    request.axis = options.axis;
    request.sweep = &rows;
    write_output(options.svg_out, render_plot(request), out);
  }
}

void cmd_fit_b(const FitBOptions& options, std::ostream& out) {
  const AudioBuffer audio = load_wav(options.input);
  const std::vector<Spectrum> spectra = stft(audio, options.frame);
  if (spectra.empty()) throw AnalysisError("input shorter than one analysis window");
  const Spectrum mean = average_spectrum(spectra);
  PeakConfig peaks;
  peaks.floor_db = options.floor_db;
  peaks.max_peaks = options.max_partials;
  const PartialFrame frame = make_frame(pick_peaks(mean, peaks), mean.frame_time);
  const InharmonicityFit fit = fit_inharmonicity_coefficient(frame);

  nlohmann::json partials = nlohmann::json::array();
  for (std::size_t i = 0; i < frame.partials.size(); ++i)
    partials.push_back({{"freq_hz", frame.partials[i].freq}, {"harmonic", fit.indices[i]}});
  const nlohmann::json doc = {
      {"tool", {{"name", "inharm"}, {"version", kToolVersion}}},
      {"input", {{"path", options.input.generic_string()}, {"sample_rate", audio.sample_rate}}},
      {"settings",
       {{"window_size", options.frame.window_size},
        {"hop_size", options.frame.hop_size},
        {"window", std::string(to_string(options.frame.window_kind))},
        {"zero_pad", options.frame.zero_pad},
        {"floor_db", options.floor_db},
        {"max_partials", options.max_partials}}},
      {"B", fit.B},
      {"f0_hz", fit.f0},
      {"residual_rms_hz", fit.residual_rms},
      {"partials", partials}};
  write_output(options.json_out, doc.dump(2) + "\n", out);
}

void cmd_filter(const FilterOptions& options, std::ostream& out) {
  (void)out;
  if (options.out.empty()) throw std::invalid_argument("filter needs an output WAV path");
  const AudioBuffer audio = load_wav(options.input);
  FrameSpec frame;
  frame.window_size = options.window_size;
  frame.hop_size = options.window_size / 4;
  save_wav(apply_partial_filter(audio, options.spec, frame), options.out);
}

void cmd_plot(const PlotOptions& options, std::ostream& out) {
  PlotRequest request;
  request.kind = options.kind;
  request.axis = options.axis;
  request.record = options.record;

  std::optional<AnalysisReport> report;
  std::vector<Spectrum> spectra;
  std::vector<SweepRow> sweep;
  if (!options.report.empty()) {
    report = report_from_json(read_text(options.report));
    request.report = &*report;
  }
  if (!options.audio.empty()) {
    const AudioBuffer audio = load_wav(options.audio);
    const AnalysisSettings settings = report ? report->settings : AnalysisSettings{};
    std::optional<LoudnessContour> contour;
    if (settings.weighting)
      contour = settings.contour_csv.empty() ? LoudnessContour::iso226(settings.phon)
                                             : LoudnessContour::from_csv(settings.contour_csv);
    spectra = stft(audio, settings.frame, contour);
    request.spectra = &spectra;
  }
  if (!options.sweep_csv.empty()) {
    sweep = parse_sweep_csv(read_text(options.sweep_csv));
    request.sweep = &sweep;
  }
  write_output(options.out, render_plot(request), out);
}

}  // namespace inharm
