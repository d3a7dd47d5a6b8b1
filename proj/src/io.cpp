#include "aahbath/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace aahbath::io {

std::string format_table(const Table& table, const ModelConfig& cfg) {
    std::ostringstream os;
    os << "# cfg_hash=" << config_hash_hex(cfg) << "\n";
    for (const auto& m : table.meta) os << "# " << m << "\n";
    os << "#";
    for (const auto& c : table.columns) os << " " << c;
    os << "\n";
    char buf[40];
    for (const auto& row : table.rows) {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("format_table: row width mismatch");
        for (size_t i = 0; i < row.size(); ++i) {
            std::snprintf(buf, sizeof(buf), "%.16e", row[i]);
            os << (i ? " " : "") << buf;
        }
        os << "\n";
    }
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open for writing: " + tmp.string());
        f << content;
        if (!f) throw std::runtime_error("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

void export_table(const Table& table, const ModelConfig& cfg, const std::string& path) {
    write_file_atomic(path, format_table(table, cfg));
}

} // namespace aahbath::io
