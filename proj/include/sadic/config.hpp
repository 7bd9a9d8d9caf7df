// Experiment configuration: a flat key = value file with CLI overrides,
// typed accessors with validation, grid parsing, hashing and the run
// manifest.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sadic {

struct ConfigError : std::invalid_argument {
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

class ExperimentConfig {
public:
    ExperimentConfig() = default;

    // Lines of "key = value"; '#' starts a comment; later keys win.
    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_string(const std::string& text);

    void set(const std::string& key, const std::string& value) { values_[key] = value; }
    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double number(const std::string& key, double fallback) const;
    double require_number(const std::string& key) const;
    long integer(const std::string& key, long fallback) const;
    bool flag(const std::string& key, bool fallback) const;
    std::uint64_t seed() const; // mandatory for stochastic sequence modes

    // "lo:hi:step" (linear), "log:lo:hi:count", or a comma list.
    std::vector<double> grid(const std::string& key) const;
    std::vector<double> grid_or(const std::string& key, const std::string& fallback_spec) const;

    std::string canonical() const;       // sorted "key = value" lines
    std::string hash() const;            // FNV-1a of the canonical form, hex

    const std::map<std::string, std::string>& values() const { return values_; }

private:
    std::map<std::string, std::string> values_;
};

std::vector<double> parse_grid(const std::string& spec, const std::string& field_name);

struct RunManifest {
    std::string config_hash;
    std::string version;
    std::string created_utc;
    struct Task {
        std::string name;
        std::string status; // ok | error | budget-exceeded
        std::vector<std::string> outputs;
        std::string detail;
    };
    std::vector<Task> tasks;

    std::string to_json() const;
    void write(const std::string& path) const;
};

} // namespace sadic
