#pragma once

#include <cstddef>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "inharm/error.hpp"
#include "inharm/partial_filter.hpp"
#include "inharm/pitch.hpp"
#include "inharm/plots.hpp"
#include "inharm/report.hpp"

namespace inharm {

enum ExitCode : int { kExitOk = 0, kExitIo = 1, kExitUsage = 2, kExitAnalysis = 3 };

/// Runs `fn` and maps exceptions to exit codes, printing the message to `err`:
/// IoError -> 1, std::invalid_argument -> 2, AnalysisError -> 3.
template <typename Fn>
int run_command(Fn&& fn, std::ostream& err) {
  try {
    fn();
    return kExitOk;
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const AnalysisError& e) {
    err << "analysis failed: " << e.what() << "\n";
    return kExitAnalysis;
  } catch (const std::invalid_argument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kExitUsage;
  }
}

/// Path from the INHARM_CONFIG environment variable, if set and nonempty.
std::optional<std::filesystem::path> default_config_path();

/// "-" or empty writes to `out`. Throws IoError.
void write_output(const std::filesystem::path& path, const std::string& content, std::ostream& out);

struct AnalyzeOptions {
  std::filesystem::path input;
  std::filesystem::path json_out;  // empty: stdout
  std::filesystem::path csv_out;
  std::vector<std::pair<PlotKind, std::filesystem::path>> plots;
  AxisMode axis = AxisMode::Hz;
  AnalysisSettings settings;
};
void cmd_analyze(const AnalyzeOptions& options, std::ostream& out);

struct SynthOptions {
  std::filesystem::path spec;
  std::filesystem::path out;
  int sample_rate = 44100;
  std::filesystem::path table_csv;  // optional partial table
};
void cmd_synth(const SynthOptions& options, std::ostream& out);

struct SweepOptions {
  SweepConfig config;
  std::filesystem::path csv_out;  // empty: stdout
  std::filesystem::path svg_out;
  std::filesystem::path wav_dir;  // optional rendered members
  AxisMode axis = AxisMode::Hz;
};
void cmd_sweep(const SweepOptions& options, std::ostream& out);

struct FitBOptions {
  std::filesystem::path input;
  std::filesystem::path json_out;
  FrameSpec frame;
  double floor_db = 60.0;
  std::size_t max_partials = 27;
};
void cmd_fit_b(const FitBOptions& options, std::ostream& out);

struct FilterOptions {
  std::filesystem::path input;
  std::filesystem::path out;
  FilterSpec spec;
  int window_size = 4096;
};
void cmd_filter(const FilterOptions& options, std::ostream& out);

struct PlotOptions {
  PlotKind kind = PlotKind::SpectrogramOverlay;
  AxisMode axis = AxisMode::Hz;
  std::filesystem::path report;
  std::filesystem::path audio;
  std::filesystem::path sweep_csv;
  std::filesystem::path out;
  std::optional<std::size_t> record;
};
void cmd_plot(const PlotOptions& options, std::ostream& out);

}  // namespace inharm
