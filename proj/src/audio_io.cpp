#include "inharm/audio_io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>

#include "inharm/error.hpp"

namespace inharm {

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;
constexpr double kScale16 = 32768.0;
constexpr double kScale24 = 8388608.0;

std::uint16_t read_u16(const unsigned char* p) { return std::uint16_t(p[0] | (p[1] << 8)); }

std::uint32_t read_u32(const unsigned char* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(char(v & 0xFF));
  out.push_back(char((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(char((v >> (8 * i)) & 0xFF));
}

}  // namespace

void AudioBuffer::validate() const {
  if (sample_rate <= 0) throw std::invalid_argument("AudioBuffer: sample_rate must be positive");
  if (!samples.isFinite().all()) throw std::invalid_argument("AudioBuffer: non-finite sample");
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "hann") return WindowKind::Hann;
  if (name == "hamming") return WindowKind::Hamming;
  if (name == "rectangular" || name == "rect") return WindowKind::Rectangular;
  throw std::invalid_argument("unknown window kind: " + std::string(name));
}

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::Rectangular: return "rectangular";
    case WindowKind::Hann: return "hann";
    case WindowKind::Hamming: return "hamming";
  }
  return "unknown";
}

void FrameSpec::validate() const {
  if (window_size <= 0 || !std::has_single_bit(static_cast<unsigned>(window_size)))
    throw std::invalid_argument("FrameSpec: window_size must be a positive power of two");
  if (hop_size <= 0 || hop_size > window_size)
    throw std::invalid_argument("FrameSpec: hop_size must be in (0, window_size]");
  if (zero_pad <= 0 || zero_pad > 64 || !std::has_single_bit(static_cast<unsigned>(zero_pad)))
    throw std::invalid_argument("FrameSpec: zero_pad must be a power of two in [1, 64]");
}

AudioBuffer load_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const auto* data = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t size = bytes.size();

  if (size < 12 || std::memcmp(data, "RIFF", 4) != 0 || std::memcmp(data + 8, "WAVE", 4) != 0)
    throw IoError(path.string() + ": not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  const unsigned char* pcm = nullptr;
  std::size_t pcm_bytes = 0;
  bool have_fmt = false;

  std::size_t pos = 12;
  while (pos + 8 <= size) {
    const std::uint32_t chunk = read_u32(data + pos + 4);
    const unsigned char* body = data + pos + 8;
    const std::size_t avail = size - (pos + 8);
    if (std::memcmp(data + pos, "fmt ", 4) == 0) {
      if (chunk < 16 || chunk > avail) throw IoError(path.string() + ": malformed fmt chunk");
      format = read_u16(body);
      channels = read_u16(body + 2);
      rate = read_u32(body + 4);
      bits = read_u16(body + 14);
      if (format == kFormatExtensible) {
        if (chunk < 40) throw IoError(path.string() + ": malformed extensible fmt chunk");
        format = read_u16(body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(data + pos, "data", 4) == 0) {
      pcm = body;
      pcm_bytes = std::min<std::size_t>(chunk, avail);
    }
    pos += 8 + std::size_t(chunk) + (chunk & 1u);
  }

  if (!have_fmt || pcm == nullptr) throw IoError(path.string() + ": missing fmt or data chunk");
  if (channels < 1 || channels > 2)
    throw IoError(path.string() + ": unsupported channel count " + std::to_string(channels));
  const bool is_pcm = format == kFormatPcm && (bits == 16 || bits == 24);
  const bool is_float = format == kFormatFloat && bits == 32;
  if (!is_pcm && !is_float)
    throw IoError(path.string() + ": unsupported encoding (format " + std::to_string(format) + ", " +
                  std::to_string(bits) + " bit)");
  if (rate == 0) throw IoError(path.string() + ": zero sample rate");

  const std::size_t bytes_per_sample = bits / 8;
  const std::size_t frame_bytes = bytes_per_sample * channels;
  const std::size_t n = pcm_bytes / frame_bytes;
  if (n == 0) throw IoError(path.string() + ": zero-length audio");

  auto sample_at = [&](const unsigned char* p) -> double {
    if (is_float) return double(std::bit_cast<float>(read_u32(p)));
    if (bits == 16) return double(std::int16_t(read_u16(p))) / kScale16;
    std::int32_t v = std::int32_t(p[0]) | (std::int32_t(p[1]) << 8) | (std::int32_t(p[2]) << 16);
    if (v & 0x800000) v -= 0x1000000;
    return double(v) / kScale24;
  };

  AudioBuffer out;
  out.sample_rate = int(rate);
  out.samples.resize(Eigen::Index(n));
  for (std::size_t i = 0; i < n; ++i) {
    const unsigned char* p = pcm + i * frame_bytes;
    double acc = 0.0;
    for (std::size_t c = 0; c < channels; ++c) acc += sample_at(p + c * bytes_per_sample);
    out.samples(Eigen::Index(i)) = acc / channels;
  }
  if (!out.samples.isFinite().all()) throw IoError(path.string() + ": non-finite samples");
  return out;
}

void save_wav(const AudioBuffer& buffer, const std::filesystem::path& path) {
  if (buffer.size() == 0) throw std::invalid_argument("save_wav: empty buffer");
  buffer.validate();

  const std::uint32_t n = std::uint32_t(buffer.size());
  const std::uint32_t data_bytes = n * 3;
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put_u32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put_u32(out, 16);
  put_u16(out, kFormatPcm);
  put_u16(out, 1);
  put_u32(out, std::uint32_t(buffer.sample_rate));
  put_u32(out, std::uint32_t(buffer.sample_rate) * 3);
  put_u16(out, 3);
  put_u16(out, 24);
  out += "data";
  put_u32(out, data_bytes);
  for (Eigen::Index i = 0; i < buffer.size(); ++i) {
    const double scaled = std::round(buffer.samples(i) * kScale24);
    const auto v = std::int32_t(std::clamp(scaled, -kScale24, kScale24 - 1.0));
    const auto u = std::uint32_t(v);
    out.push_back(char(u & 0xFF));
    out.push_back(char((u >> 8) & 0xFF));
    out.push_back(char((u >> 16) & 0xFF));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw IoError("cannot write " + path.string());
  file.write(out.data(), std::streamsize(out.size()));
  if (!file) throw IoError("write failed: " + path.string());
}

std::size_t frame_count(std::size_t length, const FrameSpec& spec) {
  spec.validate();
  const auto window = std::size_t(spec.window_size);
  if (length < window) return 0;
  return (length - window) / std::size_t(spec.hop_size) + 1;
}

std::vector<Frame> frames(const AudioBuffer& buffer, const FrameSpec& spec) {
  spec.validate();
  if (buffer.sample_rate <= 0) throw std::invalid_argument("frames: sample_rate must be positive");
  const std::size_t count = frame_count(std::size_t(buffer.size()), spec);
  if (count == 0) throw std::invalid_argument("frames: buffer shorter than one window");

  const Eigen::ArrayXd window = make_window(spec.window_kind, spec.window_size);
  std::vector<Frame> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Eigen::Index start = Eigen::Index(k) * spec.hop_size;
    Frame f;
    f.time_s = (double(start) + 0.5 * spec.window_size) / buffer.sample_rate;
    f.block = buffer.samples.segment(start, spec.window_size) * window;
    out.push_back(std::move(f));
  }
  return out;
}

}  // namespace inharm
