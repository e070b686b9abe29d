#include "kwocce/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "kwocce/errors.hpp"
#include "kwocce/rng.hpp"
#include "text_io.hpp"

namespace kwocce {

namespace {

// Embedding mixing scales: hardness loading, score loading, per-dim noise.
// Chosen so hardness is recoverable from the embedding (about 3.5 sigma of
// separation at the default 16 dims) without being a giveaway.
constexpr double kHardScale = 1.2;
constexpr double kScoreScale = 0.6;
constexpr double kNoiseScale = 0.8;

int clamp_round(double v, int max_score) {
  const double clamped = std::clamp(v, 0.0, static_cast<double>(max_score));
  return static_cast<int>(std::llround(clamped));
}

}  // namespace

void GeneratorConfig::validate() const {
  if (n_candidates < 0) {
    throw std::invalid_argument("generator: n_candidates must be >= 0");
  }
  if (!(score_mean >= 0.0)) {
    throw std::invalid_argument("generator: score_mean must be >= 0");
  }
  if (!(score_sd > 0.0)) {
    throw std::invalid_argument("generator: score_sd must be > 0");
  }
  if (!(am_noise_sd_easy >= 0.0) || !(am_noise_sd_hard >= 0.0)) {
    throw std::invalid_argument("generator: noise sds must be >= 0");
  }
  if (am_noise_sd_hard < am_noise_sd_easy) {
    throw std::invalid_argument(
        "generator: am_noise_sd_hard must be >= am_noise_sd_easy");
  }
  if (!(hard_fraction >= 0.0 && hard_fraction <= 1.0)) {
    throw std::invalid_argument("generator: hard_fraction must be in [0, 1]");
  }
  if (embedding_dim < 1) {
    throw std::invalid_argument("generator: embedding_dim must be >= 1");
  }
}

int feature_dim(const GeneratorConfig& cfg, const ScoreScheme& scheme) {
  return cfg.embedding_dim + 1 + static_cast<int>(scheme.cut_scores.size());
}

std::vector<Sample> generate(const GeneratorConfig& cfg,
                             const ScoreScheme& scheme) {
  cfg.validate();
  scheme.validate();
  const int max_score = scheme.component_max();
  const int dim = cfg.embedding_dim;

  Rng rng(cfg.seed);
  // Fixed per-generator loading directions, drawn before any sample.
  std::vector<double> hard_loading(dim), score_loading(dim);
  for (double& v : hard_loading) v = rng.uniform(-1.0, 1.0);
  for (double& v : score_loading) v = rng.uniform(-1.0, 1.0);

  std::vector<Sample> samples;
  samples.reserve(static_cast<std::size_t>(cfg.n_candidates));
  for (std::int64_t i = 0; i < cfg.n_candidates; ++i) {
    Sample s;
    s.sample_id = static_cast<std::uint64_t>(i);
    s.fa_score =
        clamp_round(rng.normal(cfg.score_mean, cfg.score_sd), max_score);
    const bool hard = rng.uniform01() < cfg.hard_fraction;
    const double noise_sd = hard ? cfg.am_noise_sd_hard : cfg.am_noise_sd_easy;
    s.am_score = clamp_round(s.fa_score + rng.normal(0.0, noise_sd), max_score);
    s.fa_level = band_of(s.fa_score, scheme);
    s.am_level = band_of(s.am_score, scheme);

    const double score_norm =
        (static_cast<double>(s.fa_score) / max_score - 0.5) * 2.0;
    s.features.reserve(feature_dim(cfg, scheme));
    for (int j = 0; j < dim; ++j) {
      s.features.push_back(kHardScale * hard_loading[j] * (hard ? 1.0 : 0.0) +
                           kScoreScale * score_loading[j] * score_norm +
                           kNoiseScale * rng.normal(0.0, 1.0));
    }
    s.features.push_back(static_cast<double>(s.am_score) / max_score);
    for (const int cut : scheme.cut_scores) {
      s.features.push_back(static_cast<double>(s.am_score - cut) / max_score);
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

DatasetSplit stratified_split(std::span<const Sample> samples,
                              SplitFractions fractions, std::uint64_t seed,
                              const ScoreScheme& scheme) {
  const double f[3] = {fractions.train, fractions.val, fractions.eval};
  double sum = 0.0;
  for (const double x : f) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument("split: fractions must be >= 0");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split: fractions must sum to 1");
  }
  int positive_splits = 0;
  for (const double x : f) positive_splits += x > 0.0 ? 1 : 0;

  // Canonical order so membership does not depend on input order.
  std::vector<std::size_t> index(samples.size());
  std::iota(index.begin(), index.end(), std::size_t{0});
  std::sort(index.begin(), index.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].sample_id < samples[b].sample_id;
  });

  std::vector<std::vector<std::size_t>> by_level(scheme.bands());
  for (const std::size_t i : index) {
    const int level = samples[i].fa_level;
    if (level < 0 || level >= scheme.bands()) {
      throw std::invalid_argument("split: sample level outside the scheme");
    }
    by_level[level].push_back(i);
  }

  Rng rng(seed);
  DatasetSplit split;
  for (int level = 0; level < scheme.bands(); ++level) {
    auto& members = by_level[level];
    const std::size_t m = members.size();
    if (m == 0) continue;
    if (static_cast<int>(m) < positive_splits) {
      throw std::invalid_argument(
          "split: level '" + scheme.level_names[level] + "' has only " +
          std::to_string(m) + " sample(s) for " +
          std::to_string(positive_splits) + " splits");
    }
    rng.shuffle(members);

    // Largest-remainder rounding of the per-level quotas.
    std::size_t counts[3];
    double remainders[3];
    std::size_t assigned = 0;
    for (int k = 0; k < 3; ++k) {
      const double quota = static_cast<double>(m) * f[k];
      counts[k] = static_cast<std::size_t>(std::floor(quota));
      remainders[k] = quota - std::floor(quota);
      assigned += counts[k];
    }
    int order[3] = {0, 1, 2};
    std::sort(order, order + 3, [&](int a, int b) {
      if (remainders[a] != remainders[b]) return remainders[a] > remainders[b];
      return a < b;
    });
    for (std::size_t leftover = m - assigned, k = 0; leftover > 0;
         --leftover, ++k) {
      ++counts[order[k]];
    }

    std::size_t pos = 0;
    std::vector<Sample>* dests[3] = {&split.train, &split.val, &split.eval};
    for (int k = 0; k < 3; ++k) {
      for (std::size_t c = 0; c < counts[k]; ++c, ++pos) {
        dests[k]->push_back(samples[members[pos]]);
      }
    }
  }
  return split;
}

void write_dataset(std::span<const Sample> samples, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open dataset file for writing: " + path);
  for (const auto& s : samples) {
    out << s.sample_id << ' ' << s.fa_score << ' ' << s.am_score << ' '
        << s.features.size();
    for (const double v : s.features) out << ' ' << detail::format_real(v);
    out << '\n';
  }
  if (!out) throw IoError("failed writing dataset file: " + path);
}

std::vector<Sample> read_dataset(const std::string& path,
                                 const ScoreScheme& scheme) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open dataset file: " + path);
  std::vector<Sample> samples;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto fields = detail::split_ws(line);
    const std::string where = path + ":" + std::to_string(line_no);
    if (fields.size() < 4) {
      throw ParseError(where + ": truncated record (need id fa am n_features)");
    }
    Sample s;
    s.sample_id = detail::parse_int<std::uint64_t>(fields[0], where + " id");
    s.fa_score = detail::parse_int<int>(fields[1], where + " fa_score");
    s.am_score = detail::parse_int<int>(fields[2], where + " am_score");
    const auto n_features =
        detail::parse_int<std::size_t>(fields[3], where + " n_features");
    if (fields.size() != 4 + n_features) {
      throw ParseError(where + ": expected " + std::to_string(n_features) +
                       " feature fields, found " +
                       std::to_string(fields.size() - 4));
    }
    s.features.reserve(n_features);
    for (std::size_t j = 0; j < n_features; ++j) {
      s.features.push_back(detail::parse_real(
          fields[4 + j], where + " feature " + std::to_string(j)));
    }
    if (s.fa_score < 0 || s.fa_score > scheme.component_max() ||
        s.am_score < 0 || s.am_score > scheme.component_max()) {
      throw ParseError(where + ": score outside [0, " +
                       std::to_string(scheme.component_max()) + "]");
    }
    s.fa_level = band_of(s.fa_score, scheme);
    s.am_level = band_of(s.am_score, scheme);
    samples.push_back(std::move(s));
  }
  return samples;
}

int training_label(const Sample& sample, Architecture arch) {
  switch (arch) {
    case Architecture::Binary: return sample.correct() ? 1 : 0;
    case Architecture::CefrNary: return sample.fa_level;
    case Architecture::ScoreBinned: return sample.fa_score;
  }
  throw std::invalid_argument("unknown architecture");
}

}  // namespace kwocce
