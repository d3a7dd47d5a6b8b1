#include "aahbath/config.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace aahbath {

namespace {

std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

std::string fmt_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ParsedConfig parse_config_text(const std::string& text) {
    ParsedConfig out;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key.empty() || val.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": empty key or value");
        try {
            if      (key == "N_s")    out.model.N_s = std::stoi(val);
            else if (key == "lambda") out.model.lambda = std::stod(val);
            else if (key == "Delta")  out.model.Delta = std::stod(val);
            else if (key == "beta")   out.model.beta = std::stod(val);
            else if (key == "phi")    out.model.phi = std::stod(val);
            else if (key == "d")      out.model.d = std::stoi(val);
            else if (key == "g")      out.model.g = std::stod(val);
            else if (key == "N_b")    out.model.N_b = std::stoi(val);
            else if (key == "dt")     out.model.dt = std::stod(val);
            else if (key == "t_max")  out.model.t_max = std::stod(val);
            else out.extra[key] = val;
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("config line " + std::to_string(lineno) + ": bad numeric value for " + key);
        }
    }
    out.model.validate();
    return out;
}

ParsedConfig load_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

std::string canonical_config(const ModelConfig& cfg) {
    std::ostringstream os;
    os << "N_s = " << cfg.N_s << "\n"
       << "lambda = " << fmt_g17(cfg.lambda) << "\n"
       << "Delta = " << fmt_g17(cfg.Delta) << "\n"
       << "beta = " << fmt_g17(cfg.beta) << "\n"
       << "phi = " << fmt_g17(cfg.phi) << "\n"
       << "d = " << cfg.d << "\n"
       << "g = " << fmt_g17(cfg.g) << "\n"
       << "N_b = " << cfg.N_b << "\n"
       << "dt = " << fmt_g17(cfg.dt) << "\n"
       << "t_max = " << fmt_g17(cfg.t_max) << "\n";
    return os.str();
}

std::uint64_t config_hash(const ModelConfig& cfg) {
    const std::string s = canonical_config(cfg);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string config_hash_hex(const ModelConfig& cfg) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(config_hash(cfg)));
    return buf;
}

} // namespace aahbath
