// Copyright 2026 The Augforge Authors
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

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "augforge/augment.hpp"
#include "augforge/error.hpp"
#include "augforge/rng.hpp"
#include "augforge/wav.hpp"
#include "doctest.h"

using namespace augforge;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const char* tag) {
  static int counter = 0;
  fs::path d = fs::temp_directory_path() /
               strformat("augforge-augment-%d-%s-%d",
                         static_cast<int>(getpid()), tag, counter++);
  fs::create_directories(d);
  return d;
}

AudioBuffer sine(double freq_hz, double secs, double amplitude = 0.3) {
  AudioBuffer buf;
  buf.sample_rate_hz = 16000;
  buf.samples.resize(static_cast<size_t>(secs * 16000));
  for (size_t i = 0; i < buf.samples.size(); ++i)
    buf.samples[i] = static_cast<float>(
        amplitude * std::sin(2.0 * M_PI * freq_hz * i / 16000.0));
  return buf;
}

AudioBuffer noise_clip(uint64_t seed, double secs, double amplitude = 0.25) {
  Rng rng(seed);
  AudioBuffer buf;
  buf.sample_rate_hz = 16000;
  buf.samples.resize(static_cast<size_t>(secs * 16000));
  for (auto& s : buf.samples)
    s = static_cast<float>(rng.uniform(-amplitude, amplitude));
  return buf;
}

// Small on-disk corpora shared by the pipeline tests.
struct TestCorpora {
  fs::path dir;
  std::vector<ManifestEntry> noise_entries;
  std::vector<ManifestEntry> rir_entries;

  explicit TestCorpora(const char* tag) : dir(fresh_dir(tag)) {
    for (int i = 0; i < 3; ++i) {
      fs::path p = dir / strformat("noise%d.wav", i);
      AudioBuffer n = noise_clip(100 + i, 1.5);
      write_wav(p, n, WavFormat::pcm16);
      noise_entries.push_back(
          {p.string(), n.duration_secs(), "", -1.0, "ambient"});
    }
    for (int i = 0; i < 2; ++i) {
      fs::path p = dir / strformat("rir%d.wav", i);
      AudioBuffer rir;
      rir.sample_rate_hz = 16000;
      rir.samples.resize(800, 0.0f);
      rir.samples[0] = 1.0f;
      Rng rng(200 + i);
      for (size_t t = 1; t < rir.samples.size(); ++t)
        rir.samples[t] = static_cast<float>(
            rng.uniform(-0.5, 0.5) * std::exp(-static_cast<double>(t) / 150.0));
      write_wav(p, rir, WavFormat::float32);
      rir_entries.push_back({p.string(), rir.duration_secs(), "", -1.0, ""});
    }
  }
  ~TestCorpora() { fs::remove_all(dir); }
};

std::string file_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

AugmentPolicy basic_policy() {
  AugmentPolicy policy;
  policy.p_aug = 1.0;
  policy.p_rir = 1.0;
  policy.seed = 7;
  return policy;
}

}  // namespace

// ---------------------------------------------------------------------------
// policy

TEST_CASE("policy validation rejects bad probabilities and intervals") {
  AugmentPolicy ok = basic_policy();
  CHECK_NOTHROW(validate_policy(ok));

  AugmentPolicy p = ok;
  p.p_aug = 1.5;
  CHECK_THROWS_AS(validate_policy(p), ConfigError);
  p = ok;
  p.p_rir = -0.1;
  CHECK_THROWS_AS(validate_policy(p), ConfigError);
  p = ok;
  p.fg_snr_db = {30.0, 0.0};
  CHECK_THROWS_AS(validate_policy(p), ConfigError);
  p = ok;
  p.codec_p_aug = 0.5;  // no families configured
  CHECK_THROWS_AS(validate_policy(p), ConfigError);
}

TEST_CASE("shipped presets match their published settings") {
  AugmentPolicy en = policy_preset("qn-en-nr");
  CHECK(en.p_aug == 0.2);
  CHECK(en.p_rir == 1.0);
  CHECK(en.fg_snr_db.lo == 0.0);
  CHECK(en.fg_snr_db.hi == 30.0);
  CHECK(en.bg_snr_db.lo == 10.0);
  CHECK(en.bg_snr_db.hi == 40.0);
  CHECK(en.codec_p_aug == 0.1);
  CHECK(en.codec_families ==
        std::vector<CodecFamily>{CodecFamily::amr_nb, CodecFamily::ogg_vorbis});

  AugmentPolicy mn = policy_preset("qn-mn-nr");
  CHECK(mn.p_aug == 0.1);
  CHECK(mn.codec_p_aug == 0.5);
  CHECK(mn.codec_families ==
        std::vector<CodecFamily>{CodecFamily::amr_nb, CodecFamily::g711});

  CHECK(policy_preset_names() ==
        std::vector<std::string>{"qn-en-nr", "qn-mn-nr"});
  CHECK_THROWS_AS(policy_preset("nope"), ConfigError);
}

TEST_CASE("policies round trip through JSON losslessly") {
  AugmentPolicy policy = policy_preset("qn-en-nr");
  policy.seed = 123456789;
  policy.fg_snr_db = {2.5, 27.5};
  AugmentPolicy back = policy_from_json(policy_to_json(policy));
  CHECK(back.p_aug == policy.p_aug);
  CHECK(back.p_rir == policy.p_rir);
  CHECK(back.fg_snr_db.lo == policy.fg_snr_db.lo);
  CHECK(back.fg_snr_db.hi == policy.fg_snr_db.hi);
  CHECK(back.bg_snr_db.lo == policy.bg_snr_db.lo);
  CHECK(back.bg_snr_db.hi == policy.bg_snr_db.hi);
  CHECK(back.codec_p_aug == policy.codec_p_aug);
  CHECK(back.codec_families == policy.codec_families);
  CHECK(back.seed == policy.seed);
  // And byte-stable on the second pass.
  CHECK(policy_to_json(back) == policy_to_json(policy));
}

TEST_CASE("policy files reject unknown keys and malformed intervals") {
  CHECK_THROWS_AS(policy_from_json("{\"p_och\": 0.5}"), ConfigError);
  CHECK_THROWS_AS(policy_from_json("{\"fg_snr_db\": [1, 2, 3]}"), ConfigError);
  CHECK_THROWS_AS(policy_from_json("{\"fg_snr_db\": 5}"), ConfigError);
  CHECK_THROWS_AS(policy_from_json("not json"), ConfigError);
  CHECK_THROWS_AS(policy_from_json("[]"), ConfigError);
  // Duplicate families collapse to a sorted unique set.
  AugmentPolicy p = policy_from_json(
      "{\"codec_p_aug\": 0.5, \"codec_families\": "
      "[\"g711\", \"amr-nb\", \"g711\"]}");
  CHECK(p.codec_families ==
        std::vector<CodecFamily>{CodecFamily::amr_nb, CodecFamily::g711});
}

TEST_CASE("policy files round trip through disk") {
  fs::path dir = fresh_dir("policyio");
  fs::path path = dir / "policy.json";
  AugmentPolicy policy = policy_preset("qn-mn-nr");
  policy.seed = 42;
  save_policy(path, policy);
  AugmentPolicy back = load_policy(path);
  CHECK(policy_to_json(back) == policy_to_json(policy));
  CHECK_THROWS_AS(load_policy(dir / "missing.json"), IoError);
  fs::remove_all(dir);
}

// ---------------------------------------------------------------------------
// draw_plan

TEST_CASE("plans are pure functions of seed and utterance id") {
  AugmentPolicy policy = basic_policy();
  policy.codec_p_aug = 0.5;
  policy.codec_families = {CodecFamily::amr_nb};
  CorporaSizes sizes{4, 9};

  AugmentPlan a = draw_plan(policy, "utt-17", sizes);
  AugmentPlan b = draw_plan(policy, "utt-17", sizes);
  CHECK(a.apply == b.apply);
  CHECK(a.use_rir == b.use_rir);
  CHECK(a.rir_index == b.rir_index);
  REQUIRE(a.fg.has_value());
  REQUIRE(b.fg.has_value());
  CHECK(a.fg->noise_index == b.fg->noise_index);
  CHECK(a.fg->snr_db == b.fg->snr_db);
  CHECK(a.fg->offset_seed == b.fg->offset_seed);
  REQUIRE(a.bg.has_value());
  CHECK(a.bg->noise_index == b.bg->noise_index);
  CHECK(a.bg->snr_db == b.bg->snr_db);
  CHECK(a.bg->phase_seed == b.bg->phase_seed);
  CHECK(a.codec.has_value() == b.codec.has_value());

  // Different utterances draw different plans (statistically).
  int distinct = 0;
  for (int i = 0; i < 16; ++i) {
    AugmentPlan c = draw_plan(policy, strformat("utt-%d", 100 + i), sizes);
    if (c.fg && c.fg->snr_db != a.fg->snr_db) ++distinct;
  }
  CHECK(distinct > 10);
}

TEST_CASE("degenerate gate probabilities behave as constants") {
  CorporaSizes sizes{2, 3};
  AugmentPolicy off;
  off.p_aug = 0.0;
  for (int i = 0; i < 50; ++i) {
    AugmentPlan plan = draw_plan(off, strformat("u%d", i), sizes);
    CHECK_FALSE(plan.apply);
    CHECK_FALSE(plan.use_rir);
    CHECK_FALSE(plan.rir_index.has_value());
    CHECK_FALSE(plan.fg.has_value());
    CHECK_FALSE(plan.bg.has_value());
    CHECK_FALSE(plan.codec.has_value());
  }

  AugmentPolicy on = basic_policy();
  for (int i = 0; i < 50; ++i) {
    AugmentPlan plan = draw_plan(on, strformat("u%d", i), sizes);
    CHECK(plan.apply);
    CHECK(plan.use_rir);
    REQUIRE(plan.rir_index.has_value());
    CHECK(*plan.rir_index < sizes.n_rirs);
    REQUIRE(plan.fg.has_value());
    CHECK(plan.fg->noise_index < sizes.n_noise);
    REQUIRE(plan.bg.has_value());
  }
}

TEST_CASE("gate frequencies converge to their probabilities") {
  AugmentPolicy policy;
  policy.p_aug = 0.2;
  policy.p_rir = 0.6;
  policy.codec_p_aug = 0.1;
  policy.codec_families = {CodecFamily::amr_nb, CodecFamily::ogg_vorbis};
  policy.seed = 99;
  CorporaSizes sizes{5, 20};

  const int n = 100000;
  int applied = 0, with_rir = 0, with_codec = 0;
  for (int i = 0; i < n; ++i) {
    AugmentPlan plan = draw_plan(policy, strformat("utt-%07d", i), sizes);
    if (!plan.apply) continue;
    ++applied;
    if (plan.use_rir) ++with_rir;
    if (plan.codec) ++with_codec;
  }
  double f_aug = static_cast<double>(applied) / n;
  double f_rir = static_cast<double>(with_rir) / applied;
  double f_codec = static_cast<double>(with_codec) / applied;
  CHECK(std::abs(f_aug - 0.2) < 0.01);
  CHECK(std::abs(f_rir - 0.6) < 0.02);
  CHECK(std::abs(f_codec - 0.1) < 0.01);
}

TEST_CASE("drawn SNRs never leave their configured intervals") {
  AugmentPolicy policy = basic_policy();
  policy.fg_snr_db = {3.0, 9.0};
  policy.bg_snr_db = {22.0, 28.0};
  CorporaSizes sizes{1, 4};
  double fg_lo = 1e9, fg_hi = -1e9, bg_lo = 1e9, bg_hi = -1e9;
  for (int i = 0; i < 20000; ++i) {
    AugmentPlan plan = draw_plan(policy, strformat("u%d", i), sizes);
    REQUIRE(plan.fg.has_value());
    REQUIRE(plan.bg.has_value());
    REQUIRE(plan.fg->snr_db >= 3.0);
    REQUIRE(plan.fg->snr_db <= 9.0);
    REQUIRE(plan.bg->snr_db >= 22.0);
    REQUIRE(plan.bg->snr_db <= 28.0);
    fg_lo = std::min(fg_lo, plan.fg->snr_db);
    fg_hi = std::max(fg_hi, plan.fg->snr_db);
    bg_lo = std::min(bg_lo, plan.bg->snr_db);
    bg_hi = std::max(bg_hi, plan.bg->snr_db);
  }
  // The draws actually cover the interval.
  CHECK(fg_lo < 3.5);
  CHECK(fg_hi > 8.5);
  CHECK(bg_lo < 22.5);
  CHECK(bg_hi > 27.5);
}

TEST_CASE("plans survive manifest shuffling untouched") {
  AugmentPolicy policy = basic_policy();
  policy.p_aug = 0.5;
  CorporaSizes sizes{3, 6};
  std::vector<std::string> ids;
  for (int i = 0; i < 64; ++i) ids.push_back(strformat("speech/u%03d.wav", i));

  std::vector<AugmentPlan> in_order;
  for (const auto& id : ids) in_order.push_back(draw_plan(policy, id, sizes));

  std::vector<size_t> perm(ids.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), std::mt19937(99));
  for (size_t i : perm) {
    AugmentPlan again = draw_plan(policy, ids[i], sizes);
    CHECK(again.apply == in_order[i].apply);
    if (again.fg && in_order[i].fg) {
      CHECK(again.fg->snr_db == in_order[i].fg->snr_db);
      CHECK(again.fg->offset_seed == in_order[i].fg->offset_seed);
    }
  }
}

TEST_CASE("a fired stage with an empty corpus is a configuration error") {
  AugmentPolicy policy = basic_policy();
  // Some utterance will fire; empty noise corpus must be caught.
  CHECK_THROWS_AS(draw_plan(policy, "u1", CorporaSizes{2, 0}), ConfigError);
  CHECK_THROWS_AS(draw_plan(policy, "u1", CorporaSizes{0, 5}), ConfigError);
  // p_rir = 0 never touches the RIR corpus.
  policy.p_rir = 0.0;
  CHECK_NOTHROW(draw_plan(policy, "u1", CorporaSizes{0, 5}));
}

// ---------------------------------------------------------------------------
// apply_plan

TEST_CASE("a non-applying plan passes audio through bit-identically") {
  AudioBuffer speech = sine(320.0, 0.6);
  AugmentPlan plan;  // apply == false
  AudioBuffer out = apply_plan(speech, plan, nullptr, nullptr, nullptr);
  REQUIRE(out.size() == speech.size());
  CHECK(std::equal(out.samples.begin(), out.samples.end(),
                   speech.samples.begin()));
}

TEST_CASE("a background-only plan at 40 dB leaves a one-percent residual") {
  TestCorpora corpora("bgonly");
  NoiseCorpus noise(corpora.noise_entries);
  AudioBuffer speech = sine(280.0, 1.0);

  AugmentPlan plan;
  plan.apply = true;
  plan.bg = BgPlan{1, 40.0, 555};
  AudioBuffer out = apply_plan(speech, plan, nullptr, &noise, nullptr);
  REQUIRE(out.size() == speech.size());

  double res = 0.0, sig = 0.0;
  for (size_t i = 0; i < out.size(); ++i) {
    double d = static_cast<double>(out.samples[i]) - speech.samples[i];
    res += d * d;
    sig += static_cast<double>(speech.samples[i]) * speech.samples[i];
  }
  double ratio = std::sqrt(res / sig);  // expect 1% at 40 dB
  CHECK(ratio == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("plan application is deterministic") {
  TestCorpora corpora("determ");
  NoiseCorpus noise(corpora.noise_entries);
  RirCorpus rirs(corpora.rir_entries);
  AudioBuffer speech = sine(300.0, 0.8);

  AugmentPlan plan;
  plan.apply = true;
  plan.use_rir = true;
  plan.rir_index = 1;
  plan.fg = FgPlan{0, 12.0, 1111};
  plan.bg = BgPlan{2, 25.0, 2222};

  AudioBuffer a = apply_plan(speech, plan, &rirs, &noise, nullptr);
  AudioBuffer b = apply_plan(speech, plan, &rirs, &noise, nullptr);
  REQUIRE(a.size() == b.size());
  CHECK(std::equal(a.samples.begin(), a.samples.end(), b.samples.begin()));
  // And it actually changed the signal.
  CHECK_FALSE(std::equal(a.samples.begin(), a.samples.end(),
                         speech.samples.begin()));
}

TEST_CASE("plan stages demand their corpora and shim") {
  AudioBuffer speech = sine(300.0, 0.5);
  AugmentPlan plan;
  plan.apply = true;
  plan.use_rir = true;
  plan.rir_index = 0;
  CHECK_THROWS_AS(apply_plan(speech, plan, nullptr, nullptr, nullptr),
                  ConfigError);

  AugmentPlan codec_plan;
  codec_plan.apply = true;
  codec_plan.codec = CodecSetting{CodecFamily::amr_nb, "4.75"};
  CHECK_THROWS_AS(apply_plan(speech, codec_plan, nullptr, nullptr, nullptr),
                  ConfigError);
  CodecShim empty_shim;
  CHECK_THROWS_AS(apply_plan(speech, codec_plan, nullptr, nullptr, &empty_shim),
                  ConfigError);

  AudioBuffer wrong_rate = speech;
  wrong_rate.sample_rate_hz = 8000;
  AugmentPlan bg_plan;
  bg_plan.apply = true;
  CHECK_THROWS_AS(apply_plan(wrong_rate, bg_plan, nullptr, nullptr, nullptr),
                  InvalidArgument);
}

// ---------------------------------------------------------------------------
// augment_manifest

TEST_CASE("an empty manifest augments to an empty result") {
  fs::path out = fresh_dir("emptyout");
  AugmentOptions options;
  options.out_dir = out;
  AugmentResult r =
      augment_manifest({}, basic_policy(), nullptr, nullptr, options);
  CHECK(r.manifest.empty());
  CHECK(r.n_processed == 0);
  CHECK(r.errors.empty());
  fs::remove_all(out);
}

TEST_CASE("p_aug zero copies every input byte-for-byte") {
  TestCorpora corpora("identity");
  fs::path out = fresh_dir("identityout");
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < 4; ++i) {
    fs::path p = corpora.dir / strformat("utt%d.wav", i);
    write_wav(p, sine(200.0 + 40 * i, 0.4),
              i % 2 ? WavFormat::float32 : WavFormat::pcm16);
    entries.push_back({p.string(), 0.4, strformat("text %d", i), -1.0, ""});
  }

  AugmentPolicy policy;
  policy.p_aug = 0.0;
  AugmentOptions options;
  options.out_dir = out;
  AugmentResult r = augment_manifest(entries, policy, nullptr, nullptr,
                                     options);
  REQUIRE(r.manifest.size() == 4);
  CHECK(r.n_augmented == 0);
  for (size_t i = 0; i < entries.size(); ++i) {
    CHECK(r.manifest[i].text == entries[i].text);
    CHECK(file_bytes(r.manifest[i].audio_filepath) ==
          file_bytes(entries[i].audio_filepath));
  }
  fs::remove_all(out);
}

TEST_CASE("worker count never changes the output bytes") {
  TestCorpora corpora("workers");
  NoiseCorpus noise(corpora.noise_entries);
  RirCorpus rirs(corpora.rir_entries);

  std::vector<ManifestEntry> entries;
  for (int i = 0; i < 24; ++i) {
    fs::path p = corpora.dir / strformat("w%02d.wav", i);
    write_wav(p, sine(180.0 + 15 * i, 0.35), WavFormat::pcm16);
    entries.push_back({p.string(), 0.35, "", -1.0, ""});
  }

  AugmentPolicy policy = basic_policy();
  policy.p_aug = 0.7;
  policy.p_rir = 0.5;
  policy.codec_p_aug = 0.3;
  policy.codec_families = {CodecFamily::ogg_vorbis};
  policy.seed = 31337;

  auto run = [&](int workers, const char* tag) {
    fs::path out = fresh_dir(tag);
    AugmentOptions options;
    options.out_dir = out;
    options.workers = workers;
    options.shim = CodecShim{"cp {in} {out}", 60};
    AugmentResult r = augment_manifest(entries, policy, &rirs, &noise,
                                       options);
    REQUIRE(r.errors.empty());
    REQUIRE(r.manifest.size() == entries.size());
    return std::pair{out, r};
  };

  auto [dir1, r1] = run(1, "w1");
  auto [dir4, r4] = run(4, "w4");
  CHECK(r1.n_augmented == r4.n_augmented);
  CHECK(r1.n_augmented > 0);
  for (size_t i = 0; i < r1.manifest.size(); ++i) {
    fs::path p1 = r1.manifest[i].audio_filepath;
    fs::path p4 = r4.manifest[i].audio_filepath;
    CHECK(p1.filename() == p4.filename());
    CHECK(file_bytes(p1) == file_bytes(p4));
  }
  fs::remove_all(dir1);
  fs::remove_all(dir4);
}

TEST_CASE("augmented outputs mirror the source WAV format") {
  TestCorpora corpora("format");
  NoiseCorpus noise(corpora.noise_entries);
  fs::path out = fresh_dir("formatout");

  fs::path p16 = corpora.dir / "pcm.wav";
  fs::path p32 = corpora.dir / "float.wav";
  write_wav(p16, sine(250.0, 0.4), WavFormat::pcm16);
  write_wav(p32, sine(260.0, 0.4), WavFormat::float32);
  std::vector<ManifestEntry> entries = {{p16.string(), 0.4, "", -1.0, ""},
                                        {p32.string(), 0.4, "", -1.0, ""}};

  AugmentPolicy policy = basic_policy();
  policy.p_rir = 0.0;
  AugmentOptions options;
  options.out_dir = out;
  AugmentResult r = augment_manifest(entries, policy, nullptr, &noise,
                                     options);
  REQUIRE(r.manifest.size() == 2);
  CHECK(probe_wav(r.manifest[0].audio_filepath).format == WavFormat::pcm16);
  CHECK(probe_wav(r.manifest[1].audio_filepath).format == WavFormat::float32);
  fs::remove_all(out);
}

TEST_CASE("per-entry failures land in the error report, not exceptions") {
  TestCorpora corpora("errors");
  NoiseCorpus noise(corpora.noise_entries);
  fs::path out = fresh_dir("errorsout");

  fs::path good = corpora.dir / "good.wav";
  write_wav(good, sine(240.0, 0.4), WavFormat::pcm16);
  std::vector<ManifestEntry> entries = {
      {good.string(), 0.4, "ok", -1.0, ""},
      {(corpora.dir / "missing.wav").string(), 1.0, "gone", -1.0, ""},
  };

  AugmentPolicy policy = basic_policy();
  policy.p_rir = 0.0;
  AugmentOptions options;
  options.out_dir = out;
  AugmentResult r = augment_manifest(entries, policy, nullptr, &noise,
                                     options);
  CHECK(r.n_processed == 2);
  REQUIRE(r.manifest.size() == 1);
  CHECK(r.manifest[0].text == "ok");
  REQUIRE(r.errors.size() == 1);
  CHECK(r.errors[0].index == 1);
  CHECK(r.errors[0].utterance_id.find("missing.wav") != std::string::npos);
  fs::remove_all(out);
}

TEST_CASE("codec-enabled policies demand a configured shim upfront") {
  AugmentPolicy policy = policy_preset("qn-en-nr");
  AugmentOptions options;
  options.out_dir = fresh_dir("noshim");
  CHECK_THROWS_AS(
      augment_manifest({}, policy, nullptr, nullptr, options), ConfigError);
  fs::remove_all(options.out_dir);
}
