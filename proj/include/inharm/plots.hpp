#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "inharm/pitch.hpp"
#include "inharm/report.hpp"
#include "inharm/spectral.hpp"

namespace inharm {

enum class PlotKind { SpectrogramOverlay, SpectrumFrame, DiffDistribution, SweepCurves, ShiftDiagram };
enum class AxisMode { Hz, Midi };

PlotKind parse_plot_kind(std::string_view name);
std::string_view to_string(PlotKind kind);
AxisMode parse_axis_mode(std::string_view name);

/// Linear map from a data interval to a pixel interval. In MIDI mode the
/// data are frequencies in Hz placed at hz_to_midi(f), and gridlines sit on
/// integer MIDI notes.
struct Axis {
  AxisMode mode = AxisMode::Hz;
  double lo = 0.0, hi = 1.0;        // Hz, or MIDI numbers in MIDI mode
  double px_lo = 0.0, px_hi = 1.0;
  static Axis for_frequencies(AxisMode mode, double lo_hz, double hi_hz, double px_lo, double px_hi);
  double value(double hz) const;     // Hz -> axis unit
  double map(double hz) const;       // Hz -> pixel
  double map_value(double v) const;  // axis unit -> pixel
  std::vector<double> gridlines() const;  // in axis units
};

/// Inputs for a plot; which fields are required depends on the kind.
struct PlotRequest {
  PlotKind kind = PlotKind::SpectrogramOverlay;
  AxisMode axis = AxisMode::Hz;
  const AnalysisReport* report = nullptr;      // all kinds except sweep_curves
  const std::vector<Spectrum>* spectra = nullptr;  // spectrogram background, spectrum_frame
  const std::vector<SweepRow>* sweep = nullptr;
  std::optional<std::size_t> record;  // spectrum_frame / shift_diagram; default middle record
  std::string title;
};

inline constexpr int kPlotWidth = 1200;
inline constexpr int kPlotHeight = 400;

/// Standalone SVG 1.1 document. Throws std::invalid_argument when the data
/// the kind needs are missing or empty.
std::string render_plot(const PlotRequest& request);

}  // namespace inharm
