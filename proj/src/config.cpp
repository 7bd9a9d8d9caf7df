#include "sadic/config.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "sadic/version.hpp"

namespace sadic {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

} // namespace

ExperimentConfig ExperimentConfig::from_string(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line = line.substr(0, hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = value;
    }
    return cfg;
}

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_string(ss.str());
}

std::string ExperimentConfig::get(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

std::string ExperimentConfig::require(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) throw ConfigError("missing required config key: " + key);
    return it->second;
}

double ExperimentConfig::number(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        double v = std::stod(it->second, &used);
        if (used != it->second.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': not a number: " + it->second);
    }
}

double ExperimentConfig::require_number(const std::string& key) const {
    require(key);
    return number(key, 0.0);
}

long ExperimentConfig::integer(const std::string& key, long fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
        std::size_t used = 0;
        long v = std::stol(it->second, &used);
        if (used != it->second.size()) throw ConfigError("");
        return v;
    } catch (...) {
        throw ConfigError("config key '" + key + "': not an integer: " + it->second);
    }
}

bool ExperimentConfig::flag(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1" || it->second == "yes") return true;
    if (it->second == "false" || it->second == "0" || it->second == "no") return false;
    throw ConfigError("config key '" + key + "': expected a boolean, got " + it->second);
}

std::uint64_t ExperimentConfig::seed() const {
    auto it = values_.find("seed");
    std::string seq = get("seq", "");
    bool stochastic = seq.rfind("iid", 0) == 0 || get("roof", "") == "random";
    if (it == values_.end()) {
        if (stochastic) throw ConfigError("missing config key 'seed' (mandatory for stochastic modes)");
        return 0;
    }
    return static_cast<std::uint64_t>(std::stoull(it->second));
}

std::vector<double> parse_grid(const std::string& spec, const std::string& field_name) {
    auto fail = [&](const std::string& why) {
        throw ConfigError("config key '" + field_name + "': " + why + ": " + spec);
    };
    if (spec.empty()) fail("empty grid");
    std::vector<std::string> parts;
    {
        std::stringstream ss(spec);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
    }
    auto to_num = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) fail("bad number '" + s + "'");
            return v;
        } catch (const ConfigError&) {
            throw;
        } catch (...) {
            fail("bad number '" + s + "'");
            return 0.0;
        }
    };
    if (parts.size() == 4 && parts[0] == "log") {
        double lo = to_num(parts[1]), hi = to_num(parts[2]);
        double count_raw = to_num(parts[3]);
        long count = static_cast<long>(count_raw);
        if (!(lo > 0) || !(hi > lo)) fail("log grid needs 0 < lo < hi");
        if (count < 2) fail("log grid needs count >= 2");
        std::vector<double> out;
        for (long i = 0; i < count; ++i)
            out.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(count - 1)));
        return out;
    }
    if (parts.size() == 3) {
        double lo = to_num(parts[0]), hi = to_num(parts[1]), step = to_num(parts[2]);
        if (!(step > 0)) fail("step must be positive");
        if (!(hi >= lo)) fail("grid needs hi >= lo");
        std::vector<double> out;
        for (double v = lo; v <= hi + 1e-12 * step; v += step) out.push_back(v);
        return out;
    }
    // comma list
    std::vector<double> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_num(item));
    if (out.empty()) fail("empty grid");
    return out;
}

std::vector<double> ExperimentConfig::grid(const std::string& key) const {
    return parse_grid(require(key), key);
}

std::vector<double> ExperimentConfig::grid_or(const std::string& key, const std::string& fallback_spec) const {
    return parse_grid(get(key, fallback_spec), key);
}

std::string ExperimentConfig::canonical() const {
    std::ostringstream os;
    for (const auto& [k, v] : values_) os << k << " = " << v << "\n";
    return os.str();
}

std::string ExperimentConfig::hash() const {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["version"] = version;
    j["created_utc"] = created_utc;
    j["tasks"] = nlohmann::json::array();
    for (const Task& t : tasks) {
        nlohmann::json tj;
        tj["name"] = t.name;
        tj["status"] = t.status;
        tj["outputs"] = t.outputs;
        if (!t.detail.empty()) tj["detail"] = t.detail;
        j["tasks"].push_back(tj);
    }
    return j.dump(2);
}

void RunManifest::write(const std::string& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("RunManifest: cannot open " + path);
    out << to_json() << "\n";
}

} // namespace sadic
