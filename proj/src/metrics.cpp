#include "causelog/metrics.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <unordered_map>
#include <utility>

#include "causelog/errors.hpp"

namespace causelog {

namespace {

std::uint64_t pairs_of(std::uint64_t n) { return n * (n - 1) / 2; }

void check_lengths(std::span<const std::string> pred, std::span<const std::string> truth,
                   std::size_t min_len) {
  if (pred.size() != truth.size())
    throw LengthMismatchError("prediction has " + std::to_string(pred.size()) +
                              " lines, ground truth has " + std::to_string(truth.size()));
  if (pred.size() < min_len)
    throw EmptyCorpusError("need at least " + std::to_string(min_len) + " lines, got " +
                           std::to_string(pred.size()));
}

struct CellCounts {
  std::unordered_map<std::string, std::uint64_t> pred_sizes;
  std::unordered_map<std::string, std::uint64_t> truth_sizes;
  std::map<std::pair<std::string, std::string>, std::uint64_t> cells;
};

CellCounts count_cells(std::span<const std::string> pred,
                       std::span<const std::string> truth) {
  CellCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    ++c.pred_sizes[pred[i]];
    ++c.truth_sizes[truth[i]];
    ++c.cells[{pred[i], truth[i]}];
  }
  return c;
}

}  // namespace

GroupingAccuracy grouping_accuracy(std::span<const std::string> pred,
                                   std::span<const std::string> truth) {
  check_lengths(pred, truth, 1);
  CellCounts c = count_cells(pred, truth);

  GroupingAccuracy out;
  out.total_events = pred.size();
  for (std::size_t i = 0; i < pred.size(); ++i) {
    std::uint64_t cell = c.cells[{pred[i], truth[i]}];
    if (cell == c.pred_sizes[pred[i]] && cell == c.truth_sizes[truth[i]])
      ++out.accurate_events;
  }
  out.accuracy = static_cast<double>(out.accurate_events) /
                 static_cast<double>(out.total_events);
  return out;
}

PairwiseF1 pairwise_f1(std::span<const std::string> pred,
                       std::span<const std::string> truth) {
  check_lengths(pred, truth, 2);
  CellCounts c = count_cells(pred, truth);

  PairwiseF1 out;
  for (const auto& [id, n] : c.pred_sizes) out.predicted_pairs += pairs_of(n);
  for (const auto& [id, n] : c.truth_sizes) out.real_pairs += pairs_of(n);
  for (const auto& [cell, n] : c.cells) out.true_pairs += pairs_of(n);

  out.precision = out.predicted_pairs == 0
                      ? 1.0
                      : static_cast<double>(out.true_pairs) /
                            static_cast<double>(out.predicted_pairs);
  out.recall = out.real_pairs == 0 ? 1.0
                                   : static_cast<double>(out.true_pairs) /
                                         static_cast<double>(out.real_pairs);
  out.f1 = out.precision + out.recall == 0.0
               ? 0.0
               : 2.0 * out.precision * out.recall / (out.precision + out.recall);
  return out;
}

EvalReport evaluate(std::span<const std::string> pred,
                    std::span<const std::string> truth) {
  EvalReport report;
  report.grouping = grouping_accuracy(pred, truth);
  report.pairwise = pairwise_f1(pred, truth);
  return report;
}

std::vector<std::string> load_assignments(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open assignments file: " + path.string());

  std::map<std::size_t, std::string> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw Error("assignments file " + path.string() + " line " +
                  std::to_string(lineno) + ": expected '<line_id>\\t<template_id>'");
    std::size_t id = 0;
    auto r = std::from_chars(line.data(), line.data() + tab, id);
    if (r.ec != std::errc{} || r.ptr != line.data() + tab)
      throw Error("assignments file " + path.string() + " line " +
                  std::to_string(lineno) + ": bad line id");
    if (!rows.emplace(id, line.substr(tab + 1)).second)
      throw Error("assignments file " + path.string() + " line " +
                  std::to_string(lineno) + ": duplicate line id " + std::to_string(id));
  }

  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& [id, group] : rows) {
    if (id != out.size())
      throw Error("assignments file " + path.string() + ": line ids are not contiguous (missing " +
                  std::to_string(out.size()) + ")");
    out.push_back(group);
  }
  return out;
}

void save_assignments(std::span<const std::string> assignments,
                      const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write assignments file: " + path.string());
  for (std::size_t i = 0; i < assignments.size(); ++i)
    out << i << '\t' << assignments[i] << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace causelog
