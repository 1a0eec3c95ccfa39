#include "inharm/synth.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "inharm/error.hpp"

namespace inharm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

// Uniform double in [0, 1) with 53 random bits; stable across standard
// library implementations unlike std::uniform_real_distribution.
double unit_uniform(std::mt19937_64& rng) { return double(rng() >> 11) * 0x1.0p-53; }

}  // namespace

double AmplitudeProfile::at(int harmonic, std::size_t position) const {
  switch (kind) {
    case Kind::Equal: return 1.0;
    case Kind::Reciprocal: return 1.0 / harmonic;
    case Kind::Power: return std::pow(double(harmonic), -exponent);
    case Kind::Custom: return position < custom.size() ? custom[position] : 0.0;
  }
  return 1.0;
}

void ToneSpec::validate() const {
  if (n_partials < 1) throw std::invalid_argument("n_partials must be at least 1");
  if (!(duration_s > 0.0) || !std::isfinite(duration_s)) throw std::invalid_argument("duration_s must be positive");
  if (!(level > 0.0 && level <= 1.0)) throw std::invalid_argument("level must be in (0, 1]");
  const bool needs_f0 = !std::holds_alternative<RegularGrid>(model);
  if (needs_f0 && !(f0 > 0.0)) throw std::invalid_argument("f0 must be positive");
  if (amplitudes.kind == AmplitudeProfile::Kind::Custom) {
    if (amplitudes.custom.size() != std::size_t(n_partials))
      throw std::invalid_argument("custom amplitude list must have n_partials entries");
    for (double a : amplitudes.custom)
      if (!(a >= 0.0) || !std::isfinite(a)) throw std::invalid_argument("custom amplitudes must be nonnegative");
  }
  std::visit(overloaded{
                 [](const Harmonic&) {},
                 [](const ShiftedResidue&) {},
                 [](const RegularGrid& g) {
                   if (!(g.d_hz > 0.0)) throw std::invalid_argument("regular_grid d_hz must be positive");
                   if (!(g.d_hz + g.s_hz > 0.0)) throw std::invalid_argument("regular_grid first partial must be positive");
                 },
                 [](const NoisyHarmonic& n) {
                   if (!(n.jitter_cents >= 0.0)) throw std::invalid_argument("jitter_cents must be nonnegative");
                 },
                 [](const Piano& p) {
                   if (!(p.B >= 0.0)) throw std::invalid_argument("piano B must be nonnegative");
                 },
                 [](const SweepMember& s) {
                   if (!(s.g_hz > 0.0)) throw std::invalid_argument("sweep_member g_hz must be positive");
                 },
             },
             model);
}

std::string model_name(const ToneModel& model) {
  return std::visit(overloaded{
                        [](const Harmonic&) { return "harmonic"; },
                        [](const ShiftedResidue&) { return "shifted_residue"; },
                        [](const RegularGrid&) { return "regular_grid"; },
                        [](const NoisyHarmonic&) { return "noisy_harmonic"; },
                        [](const Piano&) { return "piano"; },
                        [](const SweepMember&) { return "sweep_member"; },
                    },
                    model);
}

std::vector<PartialSpec> partial_table(const ToneSpec& spec, int sample_rate) {
  spec.validate();
  std::vector<PartialSpec> out;
  std::mt19937_64 jitter_rng(std::holds_alternative<NoisyHarmonic>(spec.model)
                                 ? std::get<NoisyHarmonic>(spec.model).seed
                                 : 0);
  for (int n = 1; int(out.size()) < spec.n_partials; ++n) {
    if (spec.odd_only && n % 2 == 0) continue;
    const double f0 = spec.f0;
    const double hz = std::visit(overloaded{
                                     [&](const Harmonic&) { return n * f0; },
                                     [&](const ShiftedResidue& r) { return n == 1 ? f0 : n * f0 + r.delta_hz; },
                                     [&](const RegularGrid& g) { return n * g.d_hz + g.s_hz; },
                                     [&](const NoisyHarmonic& j) {
                                       const double eps = (2.0 * unit_uniform(jitter_rng) - 1.0) * j.jitter_cents;
                                       return n * f0 * std::exp2(eps / 1200.0);
                                     },
                                     [&](const Piano& p) { return n * f0 * std::sqrt(1.0 + p.B * n * n); },
                                     [&](const SweepMember& s) { return n == 1 ? f0 : n * s.g_hz; },
                                 },
                                 spec.model);
    out.push_back({n, hz, spec.amplitudes.at(n, out.size())});
  }
  for (const PartialSpec& p : out)
    if (!(p.hz > 0.0)) throw std::invalid_argument("partial " + std::to_string(p.n) + " has nonpositive frequency");
  if (sample_rate > 0) {
    std::string bad;
    for (const PartialSpec& p : out)
      if (p.hz >= sample_rate / 2.0) bad += (bad.empty() ? "" : ", ") + std::to_string(p.n);
    if (!bad.empty()) throw std::invalid_argument("partials at or above Nyquist: n = " + bad);
  }
  return out;
}

AudioBuffer render(const ToneSpec& spec, int sample_rate) {
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
  const std::vector<PartialSpec> table = partial_table(spec, sample_rate);
  const auto length = Eigen::Index(std::llround(spec.duration_s * sample_rate));
  if (length < 1) throw std::invalid_argument("duration shorter than one sample");

  std::mt19937_64 phase_rng(spec.phase_seed);
  const Eigen::ArrayXd t = Eigen::ArrayXd::LinSpaced(length, 0.0, double(length - 1)) / double(sample_rate);
  Eigen::ArrayXd y = Eigen::ArrayXd::Zero(length);
  for (const PartialSpec& p : table) {
    const double phase = 2.0 * std::numbers::pi * unit_uniform(phase_rng);
    if (p.amplitude == 0.0) continue;
    y += p.amplitude * (2.0 * std::numbers::pi * p.hz * t + phase).sin();
  }

  const Eigen::Index fade = std::min<Eigen::Index>(Eigen::Index(std::llround(0.01 * sample_rate)), length / 2);
  for (Eigen::Index i = 0; i < fade; ++i) {
    const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * double(i) / double(fade));
    y(i) *= g;
    y(length - 1 - i) *= g;
  }
  const double peak = y.abs().maxCoeff();
  if (peak > 0.0) y *= spec.level / peak;
  return {y, sample_rate};
}

std::vector<std::pair<double, ToneSpec>> sweep_set(int n_steps, int n_partials, const ToneSpec& base) {
  if (n_steps < 2) throw std::invalid_argument("sweep needs at least two steps");
  std::vector<std::pair<double, ToneSpec>> out;
  for (int i = 0; i < n_steps; ++i) {
    const double g = i + 1 == n_steps ? kSweepHigh : kSweepLow + (kSweepHigh - kSweepLow) * i / (n_steps - 1);
    ToneSpec spec = base;
    spec.model = SweepMember{g};
    spec.f0 = kSweepLow;
    spec.n_partials = n_partials;
    spec.odd_only = false;
    out.emplace_back(g, spec);
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

using nlohmann::json;

json profile_to_json(const AmplitudeProfile& a) {
  switch (a.kind) {
    case AmplitudeProfile::Kind::Equal: return {{"kind", "equal"}};
    case AmplitudeProfile::Kind::Reciprocal: return {{"kind", "reciprocal"}};
    case AmplitudeProfile::Kind::Power: return {{"kind", "power"}, {"exponent", a.exponent}};
    case AmplitudeProfile::Kind::Custom: return {{"kind", "custom"}, {"values", a.custom}};
  }
  return {{"kind", "equal"}};
}

AmplitudeProfile profile_from_json(const json& j) {
  AmplitudeProfile a;
  const std::string kind = j.is_string() ? j.get<std::string>() : j.at("kind").get<std::string>();
  if (kind == "equal") a.kind = AmplitudeProfile::Kind::Equal;
  else if (kind == "reciprocal") a.kind = AmplitudeProfile::Kind::Reciprocal;
  else if (kind == "power") {
    a.kind = AmplitudeProfile::Kind::Power;
    a.exponent = j.at("exponent").get<double>();
  } else if (kind == "custom") {
    a.kind = AmplitudeProfile::Kind::Custom;
    a.custom = j.at("values").get<std::vector<double>>();
  } else
    throw std::invalid_argument("unknown amplitude profile: " + kind);
  return a;
}

}  // namespace

std::string tone_spec_to_json(const ToneSpec& spec) {
  json params = std::visit(overloaded{
                               [](const Harmonic&) { return json::object(); },
                               [](const ShiftedResidue& r) { return json{{"delta_hz", r.delta_hz}}; },
                               [](const RegularGrid& g) { return json{{"d_hz", g.d_hz}, {"s_hz", g.s_hz}}; },
                               [](const NoisyHarmonic& n) {
                                 return json{{"jitter_cents", n.jitter_cents}, {"seed", n.seed}};
                               },
                               [](const Piano& p) { return json{{"B", p.B}}; },
                               [](const SweepMember& s) { return json{{"g_hz", s.g_hz}}; },
                           },
                           spec.model);
  json j = {{"model", model_name(spec.model)},
            {"params", params},
            {"f0_hz", spec.f0},
            {"n_partials", spec.n_partials},
            {"amplitude_profile", profile_to_json(spec.amplitudes)},
            {"odd_only", spec.odd_only},
            {"duration_s", spec.duration_s},
            {"level", spec.level},
            {"phase_seed", spec.phase_seed}};
  return j.dump(2) + "\n";
}

ToneSpec tone_spec_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("tone spec is not valid JSON: ") + e.what());
  }
  try {
    ToneSpec spec;
    const json params = j.value("params", json::object());
    const std::string model = j.at("model").get<std::string>();
    if (model == "harmonic") spec.model = Harmonic{};
    else if (model == "shifted_residue") spec.model = ShiftedResidue{params.at("delta_hz").get<double>()};
    else if (model == "regular_grid")
      spec.model = RegularGrid{params.at("d_hz").get<double>(), params.value("s_hz", 0.0)};
    else if (model == "noisy_harmonic")
      spec.model = NoisyHarmonic{params.at("jitter_cents").get<double>(), params.value("seed", std::uint64_t{0})};
    else if (model == "piano") spec.model = Piano{params.at("B").get<double>()};
    else if (model == "sweep_member") spec.model = SweepMember{params.at("g_hz").get<double>()};
    else throw std::invalid_argument("unknown tone model: " + model);

    spec.f0 = j.value("f0_hz", spec.f0);
    spec.n_partials = j.value("n_partials", spec.n_partials);
    if (j.contains("amplitude_profile")) spec.amplitudes = profile_from_json(j.at("amplitude_profile"));
    spec.odd_only = j.value("odd_only", spec.odd_only);
    spec.duration_s = j.value("duration_s", spec.duration_s);
    spec.level = j.value("level", spec.level);
    spec.phase_seed = j.value("phase_seed", spec.phase_seed);
    spec.validate();
    return spec;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad tone spec: ") + e.what());
  }
}

ToneSpec load_tone_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tone spec " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return tone_spec_from_json(text.str());
}

}  // namespace inharm
