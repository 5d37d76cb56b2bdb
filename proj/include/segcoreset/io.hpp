#pragma once

#include <string>
#include <string_view>

#include "segcoreset/coreset.hpp"
#include "segcoreset/grid.hpp"
#include "segcoreset/segmentation.hpp"

namespace segcoreset {

enum class SignalFormat { Csv, Pgm };

// Picks pgm for a ".pgm" suffix, csv otherwise.
SignalFormat format_from_path(const std::string& path);
SignalFormat parse_signal_format(const std::string& text);

// Parse errors name the offending line (csv) or byte offset (pgm).
Signal parse_csv(std::string_view text);
Signal parse_pgm(std::string_view bytes);
Signal load_signal(const std::string& path, SignalFormat format);
Signal load_signal(const std::string& path);

std::string to_csv(const Signal& signal);
void save_csv(const Signal& signal, const std::string& path);

constexpr int kFileVersion = 1;

std::string coreset_to_json(const Coreset& coreset);
Coreset coreset_from_json(std::string_view text);
void save_coreset(const Coreset& coreset, const std::string& path);
Coreset load_coreset(const std::string& path);

// Tree documents hold either {"tree": node} or {"cells": [{rect, label}]},
// with optional "n"/"m" that must match the grid they are read against.
std::string tree_to_json(const KTree& tree, int rows, int cols);
std::string segmentation_to_json(const KSegmentation& seg);
KSegmentation segmentation_from_json(std::string_view text, int rows, int cols);
KSegmentation load_segmentation(const std::string& path, int rows, int cols);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

}  // namespace segcoreset
