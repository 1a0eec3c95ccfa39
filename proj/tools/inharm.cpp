/// @file inharm.cpp
/// @brief Command-line front end: analyze, synth, sweep, fit-b, filter, plot.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "inharm/commands.hpp"
#include "inharm/metrics.hpp"

using namespace inharm;

namespace {

void add_frame_options(CLI::App* cmd, FrameSpec& frame, std::string& window_kind) {
  cmd->add_option("--window", frame.window_size, "STFT window length in samples (power of two)")
      ->capture_default_str();
  cmd->add_option("--hop", frame.hop_size, "STFT hop in samples")->capture_default_str();
  cmd->add_option("--window-kind", window_kind, "hann, hamming or rectangular")->capture_default_str();
  cmd->add_option("--zero-pad", frame.zero_pad, "FFT zero-padding factor (power of two)")->capture_default_str();
}

struct ThresholdFlags {
  double tight, outlier, jitter, noisy_max, loose;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-spacing analysis of inharmonic tones"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  // analyze
  AnalyzeOptions analyze;
  std::string analyze_window = "hann", axis_name = "hz", config_path;
  std::vector<std::string> plot_specs;
  Thresholds defaults;
  ThresholdFlags th{defaults.tight_cents, defaults.outlier_cents, defaults.jitter_cents, defaults.noisy_max_cents,
                    defaults.loose_cents};
  bool no_weighting = false;
  auto* an = app.add_subcommand("analyze", "Track partials and classify a WAV file; writes a JSON report");
  an->add_option("input", analyze.input, "Input WAV")->required();
  an->add_option("-o,--output", analyze.json_out, "JSON report path (default stdout)");
  an->add_option("--csv", analyze.csv_out, "Per-partial CSV path");
  an->add_option("--plot", plot_specs, "<kind>:<svg path>, repeatable (spectrogram_overlay, spectrum_frame, "
                                       "diff_distribution, shift_diagram)");
  an->add_option("--axis", axis_name, "Frequency axis for plots: hz or midi")->capture_default_str();
  add_frame_options(an, analyze.settings.frame, analyze_window);
  an->add_flag("--no-weighting", no_weighting, "Analyse the raw spectrum instead of the loudness-weighted one");
  an->add_option("--phon", analyze.settings.phon, "Equal-loudness contour level")->capture_default_str();
  an->add_option("--contour-csv", analyze.settings.contour_csv, "Custom contour (hz,spl_db) replacing the built-in");
  an->add_option("--max-partials", analyze.settings.tracking.max_partials, "Partials kept per frame")
      ->capture_default_str();
  an->add_option("--floor-db", analyze.settings.tracking.peaks.floor_db, "Peak floor below the frame maximum")
      ->capture_default_str();
  an->add_option("--tol-cents", analyze.settings.tracking.tol_cents, "Grid gating tolerance")->capture_default_str();
  an->add_option("--max-delta-cents", analyze.settings.tracking.max_delta_cents, "Per-frame spacing change limit")
      ->capture_default_str();
  an->add_option("--config", config_path, "Threshold file (key = value); default from INHARM_CONFIG");
  an->add_option("--tight-cents", th.tight, "Classifier threshold")->capture_default_str();
  an->add_option("--outlier-cents", th.outlier, "Classifier threshold")->capture_default_str();
  an->add_option("--jitter-cents", th.jitter, "Classifier threshold")->capture_default_str();
  an->add_option("--noisy-max-cents", th.noisy_max, "Classifier threshold")->capture_default_str();
  an->add_option("--loose-cents", th.loose, "Classifier threshold")->capture_default_str();

  // synth
  SynthOptions synth;
  auto* sy = app.add_subcommand("synth", "Render a tone spec (JSON) to a 24-bit WAV");
  sy->add_option("spec", synth.spec, "Tone spec JSON")->required();
  sy->add_option("-o,--output", synth.out, "Output WAV")->required();
  sy->add_option("--sample-rate", synth.sample_rate, "Sample rate in Hz")->capture_default_str();
  sy->add_option("--table", synth.table_csv, "Also write the partial table as CSV");

  // sweep
  SweepOptions sweep;
  std::string sweep_profile = "power:1.5", sweep_axis = "hz", sweep_window = "hann";
  auto* sw = app.add_subcommand("sweep", "Overtone-spacing sweep from 220 to 246.94 Hz; writes CSV");
  sw->add_option("--steps", sweep.config.n_steps, "Number of sweep members")->capture_default_str();
  sw->add_option("--partials", sweep.config.n_partials, "Partials per tone, fundamental included")
      ->capture_default_str();
  sw->add_option("--amplitudes", sweep_profile, "equal, reciprocal or power:<exponent>")->capture_default_str();
  sw->add_option("--duration", sweep.config.duration_s, "Seconds per tone")->capture_default_str();
  sw->add_option("--sample-rate", sweep.config.sample_rate, "Sample rate in Hz")->capture_default_str();
  sw->add_option("--seed", sweep.config.phase_seed, "Phase seed")->capture_default_str();
  sw->add_option("--fmin", sweep.config.fmin, "Autocorrelation search floor (Hz)")->capture_default_str();
  sw->add_option("--fmax", sweep.config.fmax, "Autocorrelation search ceiling (Hz)")->capture_default_str();
  add_frame_options(sw, sweep.config.frame, sweep_window);
  sw->add_option("-o,--output", sweep.csv_out, "CSV path (default stdout)");
  sw->add_option("--svg", sweep.svg_out, "Also plot the curves");
  sw->add_option("--axis", sweep_axis, "Plot axis: hz or midi")->capture_default_str();
  sw->add_option("--wav-dir", sweep.wav_dir, "Write each rendered member into this directory");

  // fit-b
  FitBOptions fitb;
  std::string fitb_window = "hann";
  auto* fb = app.add_subcommand("fit-b", "Fit the stiff-string inharmonicity coefficient B");
  fb->add_option("input", fitb.input, "Input WAV")->required();
  fb->add_option("-o,--output", fitb.json_out, "JSON path (default stdout)");
  add_frame_options(fb, fitb.frame, fitb_window);
  fb->add_option("--floor-db", fitb.floor_db, "Peak floor below the maximum")->capture_default_str();
  fb->add_option("--max-partials", fitb.max_partials, "Strongest peaks used")->capture_default_str();

  // filter
  FilterOptions filter;
  std::vector<std::string> targets;
  auto* fl = app.add_subcommand("filter", "Attenuate or boost chosen partials");
  fl->add_option("input", filter.input, "Input WAV")->required();
  fl->add_option("-o,--output", filter.out, "Output WAV")->required();
  fl->add_option("--target", targets, "<hz>:<db>, repeatable")->required();
  fl->add_option("--bandwidth-cents", filter.spec.bandwidth_cents, "Width of each target's gain curve")
      ->capture_default_str();
  fl->add_option("--window", filter.window_size, "STFT window length (hop is a quarter)")->capture_default_str();

  // plot
  PlotOptions plot;
  std::string plot_kind, plot_axis = "hz";
  std::size_t record = 0;
  auto* pl = app.add_subcommand("plot", "Render an SVG figure from a report, audio or sweep CSV");
  pl->add_option("--kind", plot_kind,
                 "spectrogram_overlay, spectrum_frame, diff_distribution, sweep_curves or shift_diagram")
      ->required();
  pl->add_option("--report", plot.report, "Analysis report JSON");
  pl->add_option("--audio", plot.audio, "Audio for spectrogram or spectrum backgrounds");
  pl->add_option("--sweep", plot.sweep_csv, "Sweep CSV");
  auto* record_opt = pl->add_option("--record", record, "Record index for spectrum_frame and shift_diagram");
  pl->add_option("--axis", plot_axis, "hz or midi")->capture_default_str();
  pl->add_option("-o,--output", plot.out, "SVG path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  auto& out = std::cout;
  auto& err = std::cerr;

  if (*an) {
    return run_command(
        [&] {
          analyze.settings.frame.window_kind = parse_window_kind(analyze_window);
          analyze.settings.weighting = !no_weighting;
          analyze.axis = parse_axis_mode(axis_name);
          for (const std::string& spec : plot_specs) {
            const auto colon = spec.find(':');
            if (colon == std::string::npos) throw std::invalid_argument("--plot expects <kind>:<path>");
            analyze.plots.emplace_back(parse_plot_kind(spec.substr(0, colon)), spec.substr(colon + 1));
          }
          // Defaults, then the config file, then explicit flags.
          Thresholds t;
          if (!config_path.empty()) t = load_thresholds(config_path);
          else if (auto env = default_config_path()) t = load_thresholds(*env);
          if (an->count("--tight-cents")) t.tight_cents = th.tight;
          if (an->count("--outlier-cents")) t.outlier_cents = th.outlier;
          if (an->count("--jitter-cents")) t.jitter_cents = th.jitter;
          if (an->count("--noisy-max-cents")) t.noisy_max_cents = th.noisy_max;
          if (an->count("--loose-cents")) t.loose_cents = th.loose;
          for (double v : {t.tight_cents, t.outlier_cents, t.jitter_cents, t.noisy_max_cents, t.loose_cents})
            if (!(v >= 0.0)) throw std::invalid_argument("thresholds must be nonnegative");
          t.validate();
          analyze.settings.thresholds = t;
          cmd_analyze(analyze, out);
        },
        err);
  }
  if (*sy) return run_command([&] { cmd_synth(synth, out); }, err);
  if (*sw) {
    return run_command(
        [&] {
          sweep.config.frame.window_kind = parse_window_kind(sweep_window);
          sweep.axis = parse_axis_mode(sweep_axis);
          AmplitudeProfile& a = sweep.config.amplitudes;
          if (sweep_profile == "equal") a = {AmplitudeProfile::Kind::Equal, 1.0, {}};
          else if (sweep_profile == "reciprocal") a = {AmplitudeProfile::Kind::Reciprocal, 1.0, {}};
          else if (sweep_profile.rfind("power:", 0) == 0) a = {AmplitudeProfile::Kind::Power, std::stod(sweep_profile.substr(6)), {}};
          else throw std::invalid_argument("--amplitudes must be equal, reciprocal or power:<exponent>");
          cmd_sweep(sweep, out);
        },
        err);
  }
  if (*fb) {
    return run_command(
        [&] {
          fitb.frame.window_kind = parse_window_kind(fitb_window);
          cmd_fit_b(fitb, out);
        },
        err);
  }
  if (*fl) {
    return run_command(
        [&] {
          for (const std::string& t : targets) filter.spec.targets.push_back(parse_filter_target(t));
          cmd_filter(filter, out);
        },
        err);
  }
  if (*pl) {
    return run_command(
        [&] {
          plot.kind = parse_plot_kind(plot_kind);
          plot.axis = parse_axis_mode(plot_axis);
          if (record_opt->count()) plot.record = record;
          cmd_plot(plot, out);
        },
        err);
  }
  return kExitUsage;
}
