#include "qspectra/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace qspectra::cli {

namespace {

struct CommandInfo {
    Command command;
    const char* name;
};

constexpr CommandInfo kCommands[] = {
    {Command::CpbLevels, "cpb-levels"},
    {Command::CpbDispersion, "cpb-dispersion"},
    {Command::CpbAnharmonicity, "cpb-anharmonicity"},
    {Command::JunctionLevels, "junction-levels"},
    {Command::JunctionCurrent, "junction-current"},
    {Command::JunctionParity, "junction-parity"},
    {Command::BasisMap, "basis-map"},
    {Command::OracleCompare, "oracle-compare"},
};

const std::set<std::string> kIntegerKeys = {"n_levels", "M",  "L_F", "grid",  "n_phase",
                                            "sc_layers", "l", "m",   "draws", "threads"};
const std::set<std::string> kTextKeys = {"source", "target", "z"};
const std::set<std::string> kReserved = {"sweep.key", "sweep.start", "sweep.stop", "sweep.steps",
                                         "seed",      "out",         "svg"};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

KeyValues cpb_defaults() {
    return {{"E_C", "1"}, {"E_J", "50"}, {"n_g", "0"}, {"phi_0", "1"}, {"n_levels", "5"}};
}

KeyValues junction_defaults() {
    return {{"t", "1"},           {"mu_s", "8"}, {"Delta", "3"},  {"g", "2"},
            {"M", "4"},           {"L_F", "3"},  {"lambda", "0"}, {"temperature", "0"},
            {"grid", "256"},      {"threads", "0"}};
}

std::optional<Sweep> default_sweep(Command c) {
    switch (c) {
        case Command::CpbLevels: return Sweep{"n_g", 0.0, 1.0, 101};
        case Command::CpbDispersion:
        case Command::CpbAnharmonicity: return Sweep{"E_J", 1.0, 100.0, 100};
        case Command::JunctionLevels: return Sweep{"phi", 0.0, 2.0 * std::numbers::pi, 65};
        case Command::JunctionParity: return Sweep{"L_F", 1.0, 6.0, 6};
        default: return std::nullopt;
    }
}

}  // namespace

Command parse_command(const std::string& name) {
    for (const auto& info : kCommands)
        if (name == info.name) return info.command;
    throw ValidationError("unknown command '" + name + "'");
}

std::string to_string(Command c) {
    for (const auto& info : kCommands)
        if (info.command == c) return info.name;
    return "unknown";
}

std::vector<std::string> command_names() {
    std::vector<std::string> out;
    for (const auto& info : kCommands) out.emplace_back(info.name);
    return out;
}

double Sweep::value(int i) const {
    if (i == steps - 1) return stop;
    return start + (stop - start) * static_cast<double>(i) / static_cast<double>(steps - 1);
}

double RunConfig::number(const std::string& key) const {
    return parse_number(key, text(key));
}

int RunConfig::integer(const std::string& key) const { return parse_integer(key, text(key)); }

const std::string& RunConfig::text(const std::string& key) const {
    const auto it = parameters.find(key);
    if (it == parameters.end()) throw ValidationError("parameter '" + key + "' not set");
    return it->second;
}

RunConfig RunConfig::with(const std::string& key, double value) const {
    RunConfig copy = *this;
    char buf[40];
    if (kIntegerKeys.count(key))
        std::snprintf(buf, sizeof buf, "%lld", static_cast<long long>(std::llround(value)));
    else
        std::snprintf(buf, sizeof buf, "%.17g", value);
    copy.parameters[key] = buf;
    return copy;
}

std::pair<std::string, std::string> parse_assignment(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ValidationError("expected key=value, got '" + line + "'");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ValidationError("empty key in '" + line + "'");
    return {key, value};
}

KeyValues parse_config_text(const std::string& text) {
    KeyValues out;
    std::istringstream in(text);
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        if (trim(line).empty()) continue;
        try {
            auto [k, v] = parse_assignment(line);
            out[k] = v;
        } catch (const ValidationError& e) {
            throw ValidationError("config line " + std::to_string(number) + ": " + e.what());
        }
    }
    return out;
}

KeyValues read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

double parse_number(const std::string& key, const std::string& value) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(value, &used);
    } catch (const std::exception&) {
        throw ValidationError("parameter '" + key + "': '" + value + "' is not a number");
    }
    if (used != value.size() || !std::isfinite(v))
        throw ValidationError("parameter '" + key + "': '" + value + "' is not a finite number");
    return v;
}

int parse_integer(const std::string& key, const std::string& value) {
    const double v = parse_number(key, value);
    if (v != std::round(v) || std::abs(v) > 1e9)
        throw ValidationError("parameter '" + key + "': '" + value + "' is not an integer");
    return static_cast<int>(v);
}

KeyValues default_parameters(Command command) {
    KeyValues out;
    auto merge = [&out](const KeyValues& kv) { out.insert(kv.begin(), kv.end()); };
    switch (command) {
        case Command::CpbLevels:
        case Command::CpbDispersion:
        case Command::CpbAnharmonicity:
            merge(cpb_defaults());
            break;
        case Command::JunctionLevels:
            merge(junction_defaults());
            out["phi"] = "0";
            break;
        case Command::JunctionCurrent:
        case Command::JunctionParity:
            merge(junction_defaults());
            out["n_phase"] = "64";
            break;
        case Command::BasisMap:
            merge(junction_defaults());
            out["source"] = "random";
            out["draws"] = "1000";
            out["phi"] = "0.5";
            out["l"] = "1";
            out["m"] = "4";
            out["z"] = "mid";
            break;
        case Command::OracleCompare:
            merge(cpb_defaults());
            merge(junction_defaults());
            out["target"] = "cpb";
            out["n_phase"] = "9";
            out["sc_layers"] = "16";
            break;
    }
    return out;
}

RunConfig resolve_config(Command command, const KeyValues& raw) {
    RunConfig cfg;
    cfg.command = command;
    cfg.parameters = default_parameters(command);

    for (const auto& [key, value] : raw) {
        if (kReserved.count(key)) continue;
        if (!cfg.parameters.count(key))
            throw ValidationError("parameter '" + key + "' is not used by " + to_string(command));
        cfg.parameters[key] = value;
    }
    for (const auto& [key, value] : cfg.parameters) {
        if (kTextKeys.count(key)) continue;
        if (kIntegerKeys.count(key))
            parse_integer(key, value);
        else
            parse_number(key, value);
    }

    auto get = [&raw](const std::string& k) -> std::optional<std::string> {
        const auto it = raw.find(k);
        if (it == raw.end()) return std::nullopt;
        return it->second;
    };

    cfg.sweep = default_sweep(command);
    const auto key = get("sweep.key");
    if (key && (*key == "none" || key->empty())) {
        cfg.sweep.reset();
    } else if (key || get("sweep.start") || get("sweep.stop") || get("sweep.steps")) {
        Sweep s = cfg.sweep.value_or(Sweep{});
        if (key) s.key = *key;
        if (s.key.empty()) throw ValidationError("sweep.key is required for a sweep");
        if (key && cfg.sweep && *key != cfg.sweep->key && !(get("sweep.start") && get("sweep.stop")))
            throw ValidationError("sweep over '" + *key + "' needs sweep.start and sweep.stop");
        if (auto v = get("sweep.start")) s.start = parse_number("sweep.start", *v);
        if (auto v = get("sweep.stop")) s.stop = parse_number("sweep.stop", *v);
        if (auto v = get("sweep.steps")) s.steps = parse_integer("sweep.steps", *v);
        cfg.sweep = s;
    }
    if (cfg.sweep) {
        const Sweep& s = *cfg.sweep;
        if (!cfg.parameters.count(s.key) || kTextKeys.count(s.key))
            throw ValidationError("cannot sweep '" + s.key + "' for " + to_string(command));
        if (s.steps < 2) throw ValidationError("sweep.steps must be at least 2");
        if (kIntegerKeys.count(s.key)) {
            for (int i = 0; i < s.steps; ++i) {
                const double v = s.value(i);
                if (std::abs(v - std::round(v)) > 1e-9)
                    throw ValidationError("sweep over integer '" + s.key + "' hits non-integer " +
                                          std::to_string(v));
            }
        }
    }

    if (auto v = get("seed")) {
        const double s = parse_number("seed", *v);
        if (s < 0 || s != std::floor(s) || s > 9.007199254740992e15)
            throw ValidationError("seed must be a non-negative integer");
        cfg.seed = static_cast<std::uint64_t>(s);
    }
    cfg.csv_path = get("out").value_or("");
    if (cfg.csv_path.empty()) throw ValidationError("no output CSV path (--out)");
    if (auto v = get("svg"); v && !v->empty()) cfg.svg_path = *v;
    return cfg;
}

std::vector<std::string> describe(const RunConfig& config) {
    std::vector<std::string> lines;
    lines.push_back("command = " + to_string(config.command));
    for (const auto& [k, v] : config.parameters) lines.push_back(k + " = " + v);
    if (config.sweep) {
        char buf[128];
        std::snprintf(buf, sizeof buf, "%.17g", config.sweep->start);
        lines.push_back("sweep.key = " + config.sweep->key);
        lines.push_back(std::string("sweep.start = ") + buf);
        std::snprintf(buf, sizeof buf, "%.17g", config.sweep->stop);
        lines.push_back(std::string("sweep.stop = ") + buf);
        lines.push_back("sweep.steps = " + std::to_string(config.sweep->steps));
    } else {
        lines.push_back("sweep.key = none");
    }
    lines.push_back("seed = " + std::to_string(config.seed));
    return lines;
}

}  // namespace qspectra::cli
