// Copyright (c) 2026 The tinyasr Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "testing.hpp"
#include "tinyasr/audio.hpp"
#include "tinyasr/checkpoint.hpp"
#include "tinyasr/config.hpp"
#include "tinyasr/decode.hpp"
#include "tinyasr/metrics.hpp"
#include "tinyasr/model.hpp"
#include "tinyasr/random.hpp"
#include "tinyasr/rope.hpp"
#include "tinyasr/textnorm.hpp"

namespace {

using namespace tinyasr;
namespace fs = std::filesystem;

// Collects the first few failure messages of one criterion.
class Check {
 public:
  void expect(bool ok, const std::string& what) {
    if (ok) return;
    ++failures_;
    if (failures_ <= 3) detail_ += (detail_.empty() ? "" : "; ") + what;
  }
  bool ok() const { return failures_ == 0; }
  std::string detail() const {
    return failures_ > 3 ? detail_ + "; +" + std::to_string(failures_ - 3) + " more" : detail_;
  }
  std::string note;

 private:
  int failures_ = 0;
  std::string detail_;
};

std::string str(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

const fs::path kSourceDir = TINYASR_SOURCE_DIR;

void edit_distance_oracle(Check& c) {
  const CounterStream s(1);
  std::uint64_t k = 0;
  auto seq = [&] {
    std::vector<int> v(s.bits(k++) % 9);
    for (int& x : v) x = static_cast<int>(s.bits(k++) % 5);
    return v;
  };
  auto tokens = [](const std::vector<int>& v) {
    std::vector<std::u32string> out;
    for (int x : v) out.push_back(std::u32string(1, static_cast<char32_t>('a' + x)));
    return out;
  };
  int agree = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto a = seq();
    const auto b = seq();
    const auto got = edit_ops(tokens(a), tokens(b)).errors();
    const auto want = testing::brute_levenshtein(a, b);
    c.expect(got == want, "pair " + std::to_string(i) + ": " + std::to_string(got) +
                              " != " + std::to_string(want));
    agree += got == want;
  }
  c.note = std::to_string(agree) + "/1000 pairs exact";
}

void rope_relative_position(Check& c) {
  const CounterStream s(2);
  std::uint64_t k = 0;
  auto vec = [&](int n) {
    Matrix m(1, n);
    for (float& x : m.data) x = static_cast<float>(2.0 * s.unit(k++) - 1.0);
    return m;
  };
  auto dot = [](const Matrix& a, const Matrix& b) {
    double d = 0;
    for (std::size_t i = 0; i < a.data.size(); ++i) d += static_cast<double>(a.data[i]) * b.data[i];
    return d;
  };
  const int dims[] = {2, 4, 64};
  double worst_rel = 0, worst_id = 0, worst_norm = 0;
  for (int t = 0; t < 200; ++t) {
    const int hd = dims[t % 3];
    const Matrix q = vec(hd), kk = vec(hd);
    const auto m = static_cast<std::int64_t>(s.bits(k++) % 1024);
    const auto n = static_cast<std::int64_t>(s.bits(k++) % 1024);
    const auto p = static_cast<std::int64_t>(s.bits(k++) % 1024);
    const double d0 = dot(apply_rope(q, m, 10000.0), apply_rope(kk, n, 10000.0));
    const double d1 = dot(apply_rope(q, m + p, 10000.0), apply_rope(kk, n + p, 10000.0));
    worst_rel = std::max(worst_rel, std::abs(d0 - d1));

    const Matrix at0 = apply_rope(q, 0, 10000.0);
    for (std::size_t i = 0; i < q.data.size(); ++i) {
      worst_id = std::max(worst_id, static_cast<double>(std::abs(at0.data[i] - q.data[i])));
    }
    const Matrix r = apply_rope(q, m, 10000.0);
    for (std::size_t i = 0; i < q.data.size(); i += 2) {
      const double before = std::hypot(q.data[i], q.data[i + 1]);
      const double after = std::hypot(r.data[i], r.data[i + 1]);
      worst_norm = std::max(worst_norm, std::abs(before - after));
    }
  }
  c.expect(worst_rel <= 1e-5, "shift error " + str(worst_rel));
  c.expect(worst_id <= 1e-6, "identity error " + str(worst_id));
  c.expect(worst_norm <= 1e-6, "norm error " + str(worst_norm));
  c.note = "max shift err " + str(worst_rel) + ", max norm err " + str(worst_norm);
}

void audio_calibration(Check& c) {
  double worst_gain = 0, worst_snr = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const AudioBuffer x = testing::random_audio(8000, seed, 0.4f);
    const double g = -40.0 + 0.5 * static_cast<double>(seed);
    const double ratio = rms(apply_gain(x, {g}).samples) / rms(x.samples);
    worst_gain = std::max(worst_gain, std::abs(ratio / std::pow(10.0, g / 20.0) - 1.0));

    const AudioBuffer noise = white_noise(5000, seed + 7);
    const double snr = -10.0 + 50.0 * static_cast<double>(seed) / 99.0;
    const AudioBuffer mixed = mix_at_snr(x, noise, {snr, seed});
    worst_snr = std::max(worst_snr, std::abs(measured_snr_db(x.samples, mixed.samples) - snr));
  }
  c.expect(worst_gain <= 1e-6, "gain rel error " + str(worst_gain));
  c.expect(worst_snr <= 0.01, "snr error " + str(worst_snr) + " dB");
  c.note = "max gain rel err " + str(worst_gain) + ", max snr err " + str(worst_snr) + " dB";
}

void variable_length_cost(Check& c) {
  const ModelConfig tiny = load_config(kSourceDir / "configs" / "moonshine_tiny.json");
  const ModelConfig toy = testing::toy_config();
  std::vector<double> durations{0.5};
  for (int t = 1; t <= 29; ++t) durations.push_back(t);
  for (const ModelConfig* cfg : {&tiny, &toy}) {
    for (double t : durations) {
      c.expect(estimate_flops(*cfg, t, 30.0) > estimate_flops(*cfg, t),
               "padding not costlier at " + str(t) + " s");
    }
    for (double t : {0.5, 1.0, 2.0, 3.0, 5.0, 7.0, 10.0, 14.0}) {
      const double one = flop_breakdown(*cfg, t).conv_stem;
      const double two = flop_breakdown(*cfg, 2 * t).conv_stem;
      c.expect(std::abs(two / (2 * one) - 1.0) <= 0.01,
               "conv(" + str(2 * t) + " s)/2conv(" + str(t) + " s) = " + str(two / (2 * one)) +
                   (cfg == &tiny ? " (tiny)" : " (toy)"));
    }
  }
  // Toy stem on 16000 samples: 249, 81, 40 frames.
  const double conv = 2.0 * 127 * 1 * 8 * 249 + 2.0 * 7 * 8 * 32 * 81 + 2.0 * 3 * 32 * 32 * 40;
  const double attn = 2 * (2.0 * 40 * 40 * 32 + 8.0 * 40 * 32 * 32);
  const double ffn = 2 * (4.0 * 40 * 32 * 32 * 4);
  const double got = estimate_flops(toy, 1.0);
  c.expect(got == conv + attn + ffn, "toy flops " + str(got) + " != " + str(conv + attn + ffn));
  c.note = "toy 1 s = " + str(got) + " (hand " + str(conv + attn + ffn) + ")";
}

void greedy_beam_equivalence(Check& c) {
  const Tokenizer tok = testing::toy_tokenizer(64);
  double worst = 0;
  int equal = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const Model m = Model::from_store(init_random(testing::toy_config(64), 1000 + seed));
    const AudioBuffer audio = testing::random_audio(16000, 2000 + seed);
    const DecodeResult g = greedy_decode(m, tok, audio);
    const DecodeResult b = beam_search(m, tok, audio, 1);
    c.expect(g.token_ids == b.token_ids, "model " + std::to_string(seed) + " differs");
    equal += g.token_ids == b.token_ids;

    std::vector<int> prefix{tok.start_id()};
    prefix.insert(prefix.end(), g.token_ids.begin(), g.token_ids.end());
    const EncoderStates enc = m.encode(audio);
    const Matrix full = m.decode_uncached(prefix, enc);
    DecoderCache cache = m.start_decoding(enc);
    for (std::size_t t = 0; t < prefix.size(); ++t) {
      const auto logits = m.decoder_step(prefix[t], static_cast<std::int64_t>(t), cache);
      for (std::size_t v = 0; v < logits.size(); ++v) {
        worst = std::max(worst, static_cast<double>(std::abs(
                                    logits[v] - full(static_cast<std::int64_t>(t),
                                                     static_cast<std::int64_t>(v)))));
      }
    }
  }
  c.expect(worst <= 1e-4, "cached/uncached logit diff " + str(worst));
  c.note = std::to_string(equal) + "/50 token-exact, max logit diff " + str(worst);
}

void parameter_count(Check& c) {
  const ModelConfig tiny = load_config(kSourceDir / "configs" / "moonshine_tiny.json");
  const std::int64_t n = count_params(tiny);
  const double rel = std::abs(static_cast<double>(n) - 27e6) / 27e6;
  c.expect(rel <= 0.05, "count " + std::to_string(n) + " is " + str(100 * rel) + "% off");
  const std::int64_t elements = init_random(tiny, 0).total_elements();
  c.expect(elements == n, "init_random has " + std::to_string(elements) + " elements");
  c.note = std::to_string(n) + " params (" + str(100 * rel) + "% from 27M)";
}

void normalizer_fixtures(Check& c) {
  const auto cases = testing::load_golden(fs::path(TINYASR_TEST_DATA_DIR) / "textnorm_golden.tsv");
  std::map<std::string, int> per_lang;
  int passed = 0;
  for (const auto& g : cases) {
    const auto lang = parse_language(g.lang);
    if (!lang) {
      c.expect(false, "line " + std::to_string(g.line) + ": bad language");
      continue;
    }
    const std::string got = normalize(g.input, *lang).text;
    c.expect(got == g.expected, "line " + std::to_string(g.line) + ": got '" + got + "'");
    passed += got == g.expected;
    ++per_lang[g.lang];
  }
  for (Language l : kAllLanguages) {
    const std::string code(language_code(l));
    c.expect(per_lang[code] >= 10, code + " has " + std::to_string(per_lang[code]) + " cases");
  }
  using Fn = std::string (*)(std::string_view);
  const std::pair<const char*, Fn> fns[] = {{"arabic", normalize_arabic},
                                            {"korean", normalize_korean},
                                            {"japanese", normalize_japanese},
                                            {"basic", normalize_basic}};
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const std::string s = testing::random_unicode_string(seed);
    for (const auto& [name, fn] : fns) {
      const std::string once = fn(s);
      c.expect(fn(once) == once, std::string(name) + " not idempotent, seed " + std::to_string(seed));
    }
    for (Language l : kAllLanguages) {
      const std::string once = normalize(s, l).text;
      c.expect(normalize(once, l).text == once,
               std::string(language_code(l)) + " not idempotent, seed " + std::to_string(seed));
    }
  }
  c.note = std::to_string(passed) + "/" + std::to_string(cases.size()) +
           " goldens, 1000 idempotence strings";
}

void checkpoint_round_trip(Check& c) {
  const testing::TempDir dir;
  TensorStore store;
  store.metadata()["config"] = config_to_json(testing::toy_config());
  const CounterStream s(8);
  std::uint64_t k = 0;
  for (int i = 0; i < 100; ++i) {
    TensorRecord r;
    r.name = "tensor." + std::to_string(i);
    r.shape = {1 + static_cast<std::int64_t>(s.bits(k++) % 9),
               1 + static_cast<std::int64_t>(s.bits(k++) % 9)};
    r.data.resize(static_cast<std::size_t>(r.numel()));
    for (float& v : r.data) v = static_cast<float>(s.unit(k++) - 0.5);
    store.add(std::move(r));
  }
  save(store, dir / "a.ckpt");
  const TensorStore loaded = load(dir / "a.ckpt");
  c.expect(loaded == store, "loaded store differs");
  save(loaded, dir / "b.ckpt");
  c.expect(testing::read_file(dir / "a.ckpt") == testing::read_file(dir / "b.ckpt"),
           "re-saved bytes differ");

  auto file = [](const std::string& header, std::size_t payload, std::uint64_t declared) {
    std::vector<std::uint8_t> out(8 + header.size() + payload, 0);
    std::memcpy(out.data(), &declared, 8);
    std::memcpy(out.data() + 8, header.data(), header.size());
    return out;
  };
  auto code_of = [](const std::vector<std::uint8_t>& bytes) -> int {
    try {
      deserialize(bytes);
    } catch (const CheckpointError& e) {
      return static_cast<int>(e.code());
    }
    return -1;
  };
  const std::string overlap =
      R"({"a":{"dtype":"f32","shape":[2],"offset":0,"length":8},)"
      R"("b":{"dtype":"f32","shape":[2],"offset":4,"length":8}})";
  const std::string dtype = R"({"a":{"dtype":"q4","shape":[1],"offset":0,"length":4}})";
  const std::string bad_json = "{\"a\":";
  const std::pair<std::vector<std::uint8_t>, CheckpointErrc> fixtures[] = {
      {file("{}", 0, 4096), CheckpointErrc::kTruncated},
      {file(bad_json, 0, bad_json.size()), CheckpointErrc::kMalformedHeader},
      {file(overlap, 12, overlap.size()), CheckpointErrc::kBadLayout},
      {file(dtype, 4, dtype.size()), CheckpointErrc::kUnknownDtype},
  };
  std::set<int> codes;
  for (const auto& [bytes, want] : fixtures) {
    const int got = code_of(bytes);
    c.expect(got == static_cast<int>(want), "fixture gave code " + std::to_string(got));
    codes.insert(got);
  }
  c.expect(codes.size() == 4, "errors not distinct");
  c.note = "100 tensors byte-identical, 4 distinct malformed-file errors";
}

void end_to_end_smoke(Check& c) {
#ifdef TINYASR_CLI_PATH
  const std::string cli = TINYASR_CLI_PATH;
  const testing::TempDir dir;
  const fs::path manifest = testing::write_smoke_fixture(dir.path());
  const std::string model = "--model '" + (dir / "toy.ckpt").string() + "' --tokenizer '" +
                            (dir / "tokenizer.json").string() + "'";

  const std::string transcribe = "transcribe " + model + " --audio '" + (dir / "s0.wav").string() + "'";
  const auto t1 = testing::run_command(cli, transcribe);
  const auto t2 = testing::run_command(cli, transcribe);
  c.expect(t1.exit_code == 0, "transcribe exit " + std::to_string(t1.exit_code) + ": " + t1.err);
  c.expect(t1.out == t2.out, "transcripts differ across runs");

  const std::string eval = "eval " + model + " --manifest '" + manifest.string() + "' --lang uk";
  const auto serial = testing::run_command(cli, eval + " --jobs 1");
  const auto parallel = testing::run_command(cli, eval + " --jobs 4");
  c.expect(serial.exit_code == 0 && parallel.exit_code == 0, "eval failed: " + serial.err);
  c.expect(serial.out == parallel.out, "serial and parallel reports differ");

  const std::string sweep = "sweep " + model + " --manifest '" + manifest.string() +
                            "' --lang uk --gains -20,0 --snrs 10,20 --seed 5 --format csv";
  const auto g1 = testing::run_command(cli, sweep);
  const auto g2 = testing::run_command(cli, sweep + " --jobs 3");
  c.expect(g1.exit_code == 0, "sweep exit " + std::to_string(g1.exit_code) + ": " + g1.err);
  c.expect(g1.out == g2.out, "sweep grids differ across runs");

  std::istringstream rows(g1.out);
  std::string line;
  std::getline(rows, line);
  c.expect(line == "gain_db,snr_db,error_percent", "unexpected csv header '" + line + "'");
  std::set<std::pair<std::string, std::string>> cells;
  while (std::getline(rows, line)) {
    const auto a = line.find(',');
    const auto b = line.find(',', a + 1);
    const std::string value = line.substr(b + 1);
    c.expect(!value.empty(), "empty cell value");
    cells.insert({line.substr(0, a), line.substr(a + 1, b - a - 1)});
  }
  const std::set<std::pair<std::string, std::string>> want{
      {"-20", "10"}, {"-20", "20"}, {"0", "10"}, {"0", "20"}};
  c.expect(cells == want, "grid has " + std::to_string(cells.size()) + " distinct cells");
  c.note = "transcript '" + t1.out.substr(0, t1.out.find('\n')).substr(0, 24) +
           "...', 2x2 grid complete";
#else
  c.expect(false, "built without the command-line tool");
#endif
}

void metric_formulas(Check& c) {
  const double ua = unit_accuracy(20, 27'000'000).value;
  // The quoted 2.962963e-6 is 80/27e6 rounded to 7 digits; compare the
  // exact quotient at 1e-12 and the rounded display separately.
  const double exact = 80.0 / 27e6;
  c.expect(std::abs(ua - exact) <= 1e-12 * exact, "unit accuracy " + str(ua));
  char shown[32];
  std::snprintf(shown, sizeof shown, "%.6e", ua);
  c.expect(std::string(shown) == "2.962963e-06", std::string("unit accuracy shows ") + shown);

  std::map<std::string, ErrorRate> base, model;
  for (int i = 0; i < 12; ++i) {
    const double b = 4.0 + 2.5 * i;
    base["eval" + std::to_string(i)] = {b};
    model["eval" + std::to_string(i)] = {b * (1.0 - 0.48)};
  }
  const double reduction = error_delta(model, base).mean_relative_reduction;
  char fixed[32];
  std::snprintf(fixed, sizeof fixed, "%.2f", reduction);
  c.expect(std::string(fixed) == "48.00", "relative reduction " + str(reduction));
  c.note = "unit accuracy " + str(ua) + ", reduction " + fixed + "%";
}

struct Criterion {
  int id;
  const char* name;
  double limit_s;
  std::function<void(Check&)> run;
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {1, "edit-distance oracle", 5, edit_distance_oracle},
      {2, "rope relative position", 1, rope_relative_position},
      {3, "audio calibration", 5, audio_calibration},
      {4, "variable-length cost", 1, variable_length_cost},
      {5, "greedy/beam equivalence", 60, greedy_beam_equivalence},
      {6, "parameter count", 1, parameter_count},
      {7, "normalizer fixtures", 5, normalizer_fixtures},
      {8, "checkpoint round-trip", 5, checkpoint_round_trip},
      {9, "end-to-end smoke", 120, end_to_end_smoke},
      {10, "metric formulas", 1, metric_formulas},
  };
  int failed = 0;
  for (const Criterion& cr : criteria) {
    Check c;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.expect(false, std::string("exception: ") + e.what());
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    c.expect(secs <= cr.limit_s, "took " + str(secs) + " s, limit " + str(cr.limit_s) + " s");
    failed += !c.ok();
    std::printf("%s %2d %-26s %7.3fs  %s\n", c.ok() ? "PASS" : "FAIL", cr.id, cr.name, secs,
                c.ok() ? c.note.c_str() : c.detail().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}
