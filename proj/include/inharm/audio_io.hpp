#pragma once

#include <cstddef>
#include <filesystem>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace inharm {

/// Mono analysis stream. Samples are nominally in [-1, 1].
struct AudioBuffer {
  Eigen::ArrayXd samples;
  int sample_rate = 0;

  Eigen::Index size() const { return samples.size(); }
  double duration() const { return sample_rate > 0 ? double(samples.size()) / sample_rate : 0.0; }
  // Throws std::invalid_argument unless sample_rate > 0 and every sample is finite.
  void validate() const;
};

enum class WindowKind { Rectangular, Hann, Hamming };

WindowKind parse_window_kind(std::string_view name);
std::string_view to_string(WindowKind kind);

/// Periodic (DFT-even) taper of length n.
template <typename Scalar = double>
Eigen::Array<Scalar, Eigen::Dynamic, 1> make_window(WindowKind kind, Eigen::Index n) {
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;
  const Array phase = Array::LinSpaced(n, Scalar(0), Scalar(n - 1)) * (Scalar(2) * Scalar(EIGEN_PI) / Scalar(n));
  switch (kind) {
    case WindowKind::Rectangular: return Array::Ones(n);
    case WindowKind::Hann: return Scalar(0.5) - Scalar(0.5) * phase.cos();
    case WindowKind::Hamming: return Scalar(0.54) - Scalar(0.46) * phase.cos();
  }
  return Array::Ones(n);
}

struct FrameSpec {
  int window_size = 4096;
  int hop_size = 1024;
  WindowKind window_kind = WindowKind::Hann;
  int zero_pad = 4;  // FFT length = window_size * zero_pad; finer peak refinement

  // 0 < hop <= window; window and zero_pad powers of two.
  void validate() const;
};

struct Frame {
  double time_s = 0.0;  // centre of the window
  Eigen::ArrayXd block; // tapered samples
};

/// Reads RIFF/WAVE: PCM 16/24-bit or IEEE float 32-bit, one or two channels.
/// Stereo is averaged to mono. Throws IoError.
AudioBuffer load_wav(const std::filesystem::path& path);

/// Writes 24-bit PCM mono. Samples outside [-1, 1] are clipped.
void save_wav(const AudioBuffer& buffer, const std::filesystem::path& path);

/// floor((length - window) / hop) + 1; zero when length < window.
std::size_t frame_count(std::size_t length, const FrameSpec& spec);

std::vector<Frame> frames(const AudioBuffer& buffer, const FrameSpec& spec);

}  // namespace inharm
