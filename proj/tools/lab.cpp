// lab <kind> --config <path> [--seed N] [--trials N] [--out prefix]
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include <json.hpp>

#include "aclab/errors.hpp"
#include "aclab/lab.hpp"

namespace {

aclab::lab::ExperimentConfig load(const std::string& path, const std::string& kind)
{
    std::ifstream in(path);
    if (!in) throw aclab::ValidationError("cannot read config " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& ex) {
        throw aclab::ValidationError("config " + path + " is not JSON: " + ex.what());
    }
    if (!j.is_object()) throw aclab::ValidationError("config must be a JSON object");
    if (!j.contains("kind")) j["kind"] = kind;
    auto cfg = aclab::lab::config_from_json(j);
    if (cfg.kind != kind)
        throw aclab::ValidationError("config is for '" + cfg.kind + "' but the command asked for '" + kind + "'");
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Seeded experiments on subgraph-count anticoncentration"};
    app.set_version_flag("--version", aclab::lab::kVersion);
    std::string kind, config_path;
    std::optional<std::uint64_t> seed, trials;
    std::optional<std::string> out;
    app.add_option("kind", kind, "experiment kind")->required()->check(CLI::IsMember(aclab::lab::experiment_kinds()));
    app.add_option("--config", config_path, "JSON config file")->required();
    app.add_option("--seed", seed, "base seed (overrides the config)");
    app.add_option("--trials", trials, "trial count (overrides the config)");
    app.add_option("--out", out, "write <prefix>.jsonl and <prefix>.csv instead of CSV on stdout");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        auto cfg = load(config_path, kind);
        if (seed) cfg.seed = *seed;
        if (trials) cfg.trials = *trials;
        if (out) cfg.out = *out;
        const auto record = aclab::lab::run_experiment(cfg);
        if (cfg.out.empty()) aclab::lab::emit(record, aclab::lab::Format::Csv, std::cout);
        else aclab::lab::emit_files(record, cfg.out);
        return 0;
    } catch (const aclab::ValidationError& e) {
        std::cerr << "lab: " << e.what() << '\n';
        return 2;
    } catch (const aclab::CapacityError& e) {
        std::cerr << "lab: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "lab: " << e.what() << '\n';
        return 1;
    }
}
