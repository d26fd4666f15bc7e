#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace causelog {

struct GroupingAccuracy {
  double accuracy = 0.0;
  std::uint64_t accurate_events = 0;  // T_e
  std::uint64_t total_events = 0;     // N_s
};

struct PairwiseF1 {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::uint64_t true_pairs = 0;       // T_p
  std::uint64_t predicted_pairs = 0;  // N_p
  std::uint64_t real_pairs = 0;       // N_r
};

struct EvalReport {
  GroupingAccuracy grouping;
  PairwiseF1 pairwise;
};

// A line is accurate iff the set of lines sharing its predicted group equals
// the set sharing its true group. Throws LengthMismatchError, EmptyCorpusError.
GroupingAccuracy grouping_accuracy(std::span<const std::string> pred,
                                   std::span<const std::string> truth);

// Pair counts over all unordered line pairs; vacuous denominators score 1,
// f1 is 0 when precision + recall is 0. Requires at least 2 lines.
PairwiseF1 pairwise_f1(std::span<const std::string> pred,
                       std::span<const std::string> truth);

EvalReport evaluate(std::span<const std::string> pred,
                    std::span<const std::string> truth);

// Two-column text file: "<line_id>\t<template_id>", ids 0..n-1 in any order.
// The template id may contain spaces. Throws IoError / Error on bad content.
std::vector<std::string> load_assignments(const std::filesystem::path& path);
void save_assignments(std::span<const std::string> assignments,
                      const std::filesystem::path& path);

}  // namespace causelog
