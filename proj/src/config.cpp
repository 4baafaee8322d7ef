#include "lrfmap/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

namespace lrfmap {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

template <typename T>
void parse_into(T& field, const std::string& value) {
    std::istringstream iss(value);
    iss >> field;
    if (iss.fail() || !(iss >> std::ws).eof())
        throw std::runtime_error("bad value '" + value + "'");
}

}  // namespace

void apply_config_text(RunConfig& cfg, const std::string& text) {
    const std::map<std::string, std::function<void(const std::string&)>> setters = {
        {"seed", [&](const std::string& v) { parse_into(cfg.seed, v); }},
        {"strategy", [&](const std::string& v) { cfg.strategy = parse_strategy(v); }},
        {"slam", [&](const std::string& v) { cfg.slam = parse_slam_mode(v); }},
        {"lidar.max_range", [&](const std::string& v) { parse_into(cfg.lidar.max_range, v); }},
        {"lidar.noise_sigma_fraction",
         [&](const std::string& v) { parse_into(cfg.lidar.noise_sigma_fraction, v); }},
        {"lidar.realizations",
         [&](const std::string& v) { parse_into(cfg.lidar.realizations, v); }},
        {"lidar.dropout_probability",
         [&](const std::string& v) { parse_into(cfg.lidar.dropout_probability, v); }},
        {"lidar.rng_seed", [&](const std::string& v) { parse_into(cfg.lidar.rng_seed, v); }},
        {"motion.step_length",
         [&](const std::string& v) { parse_into(cfg.motion.step_length, v); }},
        {"motion.odo_noise_trans",
         [&](const std::string& v) { parse_into(cfg.motion.odo_noise_trans, v); }},
        {"motion.odo_noise_rot",
         [&](const std::string& v) { parse_into(cfg.motion.odo_noise_rot, v); }},
        {"motion.slip_probability",
         [&](const std::string& v) { parse_into(cfg.motion.slip_probability, v); }},
        {"motion.slip_magnitude",
         [&](const std::string& v) { parse_into(cfg.motion.slip_magnitude, v); }},
        {"motion.rng_seed", [&](const std::string& v) { parse_into(cfg.motion.rng_seed, v); }},
        {"filter.sigma_trans",
         [&](const std::string& v) { parse_into(cfg.filter.sigma_trans, v); }},
        {"filter.sigma_rot", [&](const std::string& v) { parse_into(cfg.filter.sigma_rot, v); }},
        {"filter.sigma_d", [&](const std::string& v) { parse_into(cfg.filter.sigma_d, v); }},
        {"filter.sigma_alpha",
         [&](const std::string& v) { parse_into(cfg.filter.sigma_alpha, v); }},
        {"filter.particle_count",
         [&](const std::string& v) { parse_into(cfg.particle_count, v); }},
        {"analysis.gap_threshold",
         [&](const std::string& v) { parse_into(cfg.gap_threshold, v); }},
        {"analysis.min_gap_degrees",
         [&](const std::string& v) { parse_into(cfg.min_gap_degrees, v); }},
        {"analysis.jump_threshold",
         [&](const std::string& v) { parse_into(cfg.jump_threshold, v); }},
        {"analysis.feature_gate",
         [&](const std::string& v) { parse_into(cfg.feature_gate, v); }},
        {"slam.travel_interval",
         [&](const std::string& v) { parse_into(cfg.slam_travel_interval, v); }},
        {"limits.max_nodes", [&](const std::string& v) { parse_into(cfg.max_nodes, v); }},
        {"limits.max_steps", [&](const std::string& v) { parse_into(cfg.max_steps, v); }},
    };

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line) +
                                     ": expected 'key = value'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        const auto it = setters.find(key);
        if (it == setters.end())
            throw std::runtime_error("config line " + std::to_string(line) + ": unknown key '" +
                                     key + "'");
        try {
            it->second(value);
        } catch (const std::exception& e) {
            throw std::runtime_error("config line " + std::to_string(line) + ": " + e.what());
        }
    }
    if (cfg.max_nodes <= 0 || cfg.max_steps <= 0)
        throw std::runtime_error("limits must be > 0");
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    apply_config_text(cfg, ss.str());
}

std::string strategy_name(Strategy s) {
    return s == Strategy::min_gap ? "min-gap" : "max-gap";
}

std::string slam_mode_name(SlamMode m) {
    switch (m) {
        case SlamMode::none: return "none";
        case SlamMode::similarity: return "similarity";
        case SlamMode::particle: return "particle";
    }
    return "none";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "min-gap") return Strategy::min_gap;
    if (name == "max-gap") return Strategy::max_gap;
    throw std::runtime_error("unknown strategy '" + name + "' (want min-gap or max-gap)");
}

SlamMode parse_slam_mode(const std::string& name) {
    if (name == "none") return SlamMode::none;
    if (name == "similarity") return SlamMode::similarity;
    if (name == "particle") return SlamMode::particle;
    throw std::runtime_error("unknown slam mode '" + name +
                             "' (want none, similarity or particle)");
}

}  // namespace lrfmap
