#include "kwocce/cefr.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "text_io.hpp"

namespace kwocce {

void ScoreScheme::validate() const {
  if (part_max <= 0) {
    throw std::invalid_argument("score scheme: part_max must be positive");
  }
  if (cut_scores.empty()) {
    throw std::invalid_argument("score scheme: at least one cut score");
  }
  int prev = 0;
  for (const int cut : cut_scores) {
    if (cut <= prev) {
      throw std::invalid_argument(
          "score scheme: cut scores must be strictly ascending and > 0");
    }
    if (cut > component_max()) {
      throw std::invalid_argument(
          "score scheme: cut score exceeds component_max");
    }
    prev = cut;
  }
  if (static_cast<int>(level_names.size()) != bands()) {
    throw std::invalid_argument(
        "score scheme: need one level name per band (cuts + 1)");
  }
  for (const auto& name : level_names) {
    if (name.empty() || name.find(' ') != std::string::npos ||
        name.find(',') != std::string::npos) {
      throw std::invalid_argument("score scheme: bad level name '" + name +
                                  "'");
    }
  }
}

std::string ScoreScheme::to_record() const {
  std::string record = "part_max=" + std::to_string(part_max) + " cuts=";
  for (std::size_t i = 0; i < cut_scores.size(); ++i) {
    if (i) record += ',';
    record += std::to_string(cut_scores[i]);
  }
  record += " levels=";
  for (std::size_t i = 0; i < level_names.size(); ++i) {
    if (i) record += ',';
    record += level_names[i];
  }
  return record;
}

ScoreScheme ScoreScheme::from_record(std::string_view record) {
  ScoreScheme scheme;
  scheme.cut_scores.clear();
  scheme.level_names.clear();
  bool have_cuts = false, have_levels = false;

  for (const auto token : detail::split_ws(record)) {
    const auto [key, value] = detail::split_kv(token, "score scheme record");
    if (key == "part_max") {
      scheme.part_max = detail::parse_int<int>(value, "score scheme part_max");
    } else if (key == "cuts") {
      for (const auto item : detail::split_char(value, ',')) {
        scheme.cut_scores.push_back(
            detail::parse_int<int>(item, "score scheme cut"));
      }
      have_cuts = true;
    } else if (key == "levels") {
      for (const auto item : detail::split_char(value, ',')) {
        scheme.level_names.emplace_back(item);
      }
      have_levels = true;
    } else {
      throw ParseError("score scheme record: unknown field '" +
                       std::string(key) + "'");
    }
  }
  if (!have_cuts) throw ParseError("score scheme record: missing 'cuts'");
  if (!have_levels) {
    // default names band0..bandN-1 when only cuts are given
    for (int b = 0; b < scheme.bands(); ++b) {
      scheme.level_names.push_back("band" + std::to_string(b));
    }
  }
  scheme.validate();
  return scheme;
}

int band_of(int score, const ScoreScheme& scheme) {
  if (score < 0 || score > scheme.component_max()) {
    throw std::invalid_argument("band_of: score " + std::to_string(score) +
                                " outside [0, " +
                                std::to_string(scheme.component_max()) + "]");
  }
  int band = 0;
  for (const int cut : scheme.cut_scores) {
    if (score < cut) break;
    ++band;
  }
  return band;
}

std::vector<double> bin_probabilities(std::span<const double> score_probs,
                                      const ScoreScheme& scheme) {
  if (static_cast<int>(score_probs.size()) != scheme.n_score_classes()) {
    throw std::invalid_argument(
        "bin_probabilities: expected one probability per score class");
  }
  std::vector<double> band_probs(scheme.bands(), 0.0);
  for (int s = 0; s <= scheme.component_max(); ++s) {
    band_probs[band_of(s, scheme)] += score_probs[s];
  }
  return band_probs;
}

double confidence_binary(std::span<const double> probs) {
  if (probs.size() != 2) {
    throw std::invalid_argument("confidence_binary: expected 2 classes");
  }
  return probs[1];
}

double confidence_cefr_nary(std::span<const double> band_probs, int am_level) {
  if (am_level < 0 || am_level >= static_cast<int>(band_probs.size())) {
    throw std::invalid_argument("confidence_cefr_nary: level out of range");
  }
  return band_probs[am_level];
}

double confidence_score_binned(std::span<const double> score_probs,
                               int am_score, const ScoreScheme& scheme) {
  const auto band_probs = bin_probabilities(score_probs, scheme);
  return confidence_cefr_nary(band_probs, band_of(am_score, scheme));
}

const char* architecture_name(Architecture arch) {
  switch (arch) {
    case Architecture::Binary: return "binary";
    case Architecture::CefrNary: return "cefr";
    case Architecture::ScoreBinned: return "binned";
  }
  throw std::invalid_argument("unknown architecture");
}

Architecture architecture_from_name(std::string_view name) {
  if (name == "binary") return Architecture::Binary;
  if (name == "cefr") return Architecture::CefrNary;
  if (name == "binned") return Architecture::ScoreBinned;
  throw std::invalid_argument("unknown architecture: '" + std::string(name) +
                              "' (expected binary, cefr, or binned)");
}

int n_classes_for(Architecture arch, const ScoreScheme& scheme) {
  switch (arch) {
    case Architecture::Binary: return 2;
    case Architecture::CefrNary: return scheme.bands();
    case Architecture::ScoreBinned: return scheme.n_score_classes();
  }
  throw std::invalid_argument("unknown architecture");
}

}  // namespace kwocce
