#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qspectra/config.hpp"
#include "qspectra/run.hpp"

namespace {

std::string join(const std::vector<std::string>& parts) {
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : ", ") + p;
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace qspectra::cli;

    CLI::App app{"Spectra of Cooper-pair boxes and Andreev junctions: sweeps to CSV and SVG"};
    std::string command;
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    std::string svg_path;
    std::optional<std::string> seed;

    app.add_option("command", command, "One of: " + join(command_names()))->required();
    app.add_option("--config", config_path, "key=value parameter file")->check(CLI::ExistingFile);
    app.add_option("--set", overrides, "Override one parameter, key=value (repeatable)");
    app.add_option("--out", out_path, "CSV output path")->required();
    app.add_option("--svg", svg_path, "Optional SVG plot path");
    app.add_option("--seed", seed, "Seed for randomised sampling");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error code=" << kExitValidation << " kind=validation message=\"" << e.what()
                  << "\"\n";
        return kExitValidation;
    }

    RunConfig config;
    try {
        const Command cmd = parse_command(command);
        KeyValues raw;
        if (!config_path.empty()) raw = read_config_file(config_path);
        for (const auto& item : overrides) {
            auto [key, value] = parse_assignment(item);
            raw[key] = value;
        }
        raw["out"] = out_path;
        if (!svg_path.empty()) raw["svg"] = svg_path;
        if (seed) raw["seed"] = *seed;
        config = resolve_config(cmd, raw);
    } catch (const ValidationError& e) {
        std::cerr << "error code=" << kExitValidation << " kind=validation message=\"" << e.what()
                  << "\"\n";
        return kExitValidation;
    } catch (const IoError& e) {
        std::cerr << "error code=" << kExitIo << " kind=io message=\"" << e.what() << "\"\n";
        return kExitIo;
    }
    return run(config, std::cout, std::cerr);
}
