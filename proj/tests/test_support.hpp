#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "inharm/audio_io.hpp"
#include "inharm/spectral.hpp"

namespace inharm::test {

inline AudioBuffer sine(double hz, double amplitude, double seconds, int sample_rate = 44100, double phase = 0.0) {
  const auto n = Eigen::Index(std::lround(seconds * sample_rate));
  AudioBuffer b;
  b.sample_rate = sample_rate;
  b.samples = (Eigen::ArrayXd::LinSpaced(n, 0.0, double(n - 1)) * (2.0 * std::numbers::pi * hz / sample_rate) + phase)
                  .sin() * amplitude;
  return b;
}

// Adds white Gaussian noise so that signal power / noise power = snr_db.
inline AudioBuffer with_noise(AudioBuffer b, double snr_db, std::uint64_t seed) {
  const double signal_power = b.samples.square().mean();
  const double sigma = std::sqrt(signal_power / std::pow(10.0, snr_db / 10.0));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, sigma);
  for (Eigen::Index i = 0; i < b.size(); ++i) b.samples(i) += gauss(rng);
  return b;
}

inline PartialFrame frame_of(const std::vector<double>& freqs, const std::vector<double>& powers = {}) {
  std::vector<Partial> ps;
  for (std::size_t i = 0; i < freqs.size(); ++i) ps.push_back(Partial::at(freqs[i], powers.empty() ? 1.0 : powers[i]));
  return make_frame(std::move(ps));
}

inline double circular_distance(double a, double b, double period) {
  double d = std::fmod(std::abs(a - b), period);
  return std::min(d, period - d);
}

inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("inharm_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream(path, std::ios::binary) << content;
}

inline void put_le(std::string& out, std::uint64_t v, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

// Minimal RIFF/WAVE writer for fixtures the library itself does not produce.
// format 1 = PCM, 3 = IEEE float; frames are interleaved raw sample bytes.
inline std::string wav_bytes(int format, int channels, int sample_rate, int bits, const std::string& data) {
  std::string out = "RIFF";
  put_le(out, 36 + data.size(), 4);
  out += "WAVEfmt ";
  put_le(out, 16, 4);
  put_le(out, std::uint64_t(format), 2);
  put_le(out, std::uint64_t(channels), 2);
  put_le(out, std::uint64_t(sample_rate), 4);
  put_le(out, std::uint64_t(sample_rate * channels * bits / 8), 4);
  put_le(out, std::uint64_t(channels * bits / 8), 2);
  put_le(out, std::uint64_t(bits), 2);
  out += "data";
  put_le(out, data.size(), 4);
  return out + data;
}

// Runs the CLI through the shell; returns the exit status.
inline int run_cli(const std::string& args) {
  const std::string cmd = std::string("\"") + INHARM_CLI + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace inharm::test
