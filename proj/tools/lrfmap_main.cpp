#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "lrfmap/runner.hpp"
#include "lrfmap/svg.hpp"

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << text;
}

void write_outputs(const fs::path& dir, const lrfmap::EnvironmentModel& model,
                   const lrfmap::EpisodeResult& result) {
    fs::create_directories(dir);
    write_text(dir / "map.txt", lrfmap::dump_map(result.map));
    write_text(dir / "trajectory.txt", lrfmap::dump_trajectory(result.map));
    write_text(dir / "graph.txt", lrfmap::dump_graph(result.graph));
    write_text(dir / "metrics.txt", lrfmap::format_metrics(result.metrics));
    lrfmap::write_svg_file((dir / "map.svg").string(), model, result.map);
}

int run_command(const std::string& env_path, std::uint64_t seed, const std::string& strategy,
                const std::string& slam, const std::string& config_path,
                const std::string& out_dir) {
    lrfmap::RunConfig cfg;
    if (!config_path.empty()) lrfmap::apply_config_file(cfg, config_path);
    cfg.environment = env_path;
    cfg.seed = seed;
    if (!strategy.empty()) cfg.strategy = lrfmap::parse_strategy(strategy);
    if (!slam.empty()) cfg.slam = lrfmap::parse_slam_mode(slam);

    const lrfmap::EnvironmentModel model = lrfmap::load_environment_file(cfg.environment);
    const lrfmap::EpisodeResult result = lrfmap::run_episode(model, cfg);

    if (!out_dir.empty()) write_outputs(out_dir, model, result);
    std::cout << lrfmap::format_metrics(result.metrics, /*include_timings=*/true);
    return result.metrics.complete ? 0 : 2;
}

int compare_command(const std::string& envs_dir, std::uint64_t seed,
                    const std::string& config_path, const std::string& out_dir) {
    lrfmap::RunConfig cfg;
    if (!config_path.empty()) lrfmap::apply_config_file(cfg, config_path);
    cfg.seed = seed;

    std::vector<std::string> env_paths;
    for (const auto& entry : fs::directory_iterator(envs_dir))
        if (entry.path().extension() == ".env") env_paths.push_back(entry.path().string());
    std::sort(env_paths.begin(), env_paths.end());
    if (env_paths.empty()) {
        std::cerr << "no .env files in " << envs_dir << "\n";
        return 1;
    }

    const auto rows = lrfmap::compare_strategies(cfg, env_paths);
    const std::string table = lrfmap::format_comparison(rows);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        write_text(fs::path(out_dir) / "comparison.txt", table);
    }
    std::cout << table;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"2D laser-ranging exploration and mapping simulator"};
    app.require_subcommand(1);

    std::string env_path, strategy, slam, config_path, out_dir, envs_dir;
    std::uint64_t seed = 1;

    auto* run = app.add_subcommand("run", "run one exploration episode");
    run->add_option("--env", env_path, "environment file")->required();
    run->add_option("--seed", seed, "rng seed");
    run->add_option("--strategy", strategy, "min-gap | max-gap");
    run->add_option("--slam", slam, "none | similarity | particle");
    run->add_option("--config", config_path, "key = value config file");
    run->add_option("--out", out_dir, "output directory for dumps");

    auto* compare = app.add_subcommand("compare", "min-gap vs max-gap over a directory");
    compare->add_option("--envs", envs_dir, "directory of .env files")->required();
    compare->add_option("--seed", seed, "rng seed");
    compare->add_option("--config", config_path, "key = value config file");
    compare->add_option("--out", out_dir, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed())
            return run_command(env_path, seed, strategy, slam, config_path, out_dir);
        return compare_command(envs_dir, seed, config_path, out_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
