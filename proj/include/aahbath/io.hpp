// io.hpp — deterministic plot-ready text tables: header + cfg-hash comment,
// numeric fields at 17 significant digits, atomic writes (tmp + rename).
#pragma once

#include <string>
#include <vector>

#include "aahbath/config.hpp"

namespace aahbath::io {

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> meta;    // extra comment lines (written verbatim after '# ')
};

std::string format_table(const Table& table, const ModelConfig& cfg);

// atomic write: temp file in the same directory, then rename
void write_file_atomic(const std::string& path, const std::string& content);

void export_table(const Table& table, const ModelConfig& cfg, const std::string& path);

} // namespace aahbath::io
