#include "qspectra/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "qspectra/basis_map.hpp"
#include "qspectra/cpb.hpp"
#include "qspectra/current.hpp"
#include "qspectra/errors.hpp"
#include "qspectra/junction.hpp"
#include "qspectra/lattice.hpp"

namespace qspectra::cli {

namespace {

using junction::JunctionParams;
using Row = std::vector<std::string>;

constexpr double kCpbOracleTolerance = 1e-8;
constexpr double kLatticeOracleTolerance = 1e-3;

std::string integer_text(long long v) { return std::to_string(v); }

cpb::CpbParams cpb_params(const RunConfig& c) {
    cpb::CpbParams p;
    p.E_C = c.number("E_C");
    p.E_J = c.number("E_J");
    p.n_g = c.number("n_g");
    p.phi_0 = c.number("phi_0");
    p.validate();
    return p;
}

JunctionParams junction_params(const RunConfig& c) {
    JunctionParams p;
    p.t = c.number("t");
    p.mu_s = c.number("mu_s");
    p.Delta = c.number("Delta");
    p.g = c.number("g");
    p.M = c.integer("M");
    p.L_F = c.integer("L_F");
    p.lambda = c.number("lambda");
    p.temperature = c.number("temperature");
    p.validate();
    return p;
}

bool is_cpb(Command c) {
    return c == Command::CpbLevels || c == Command::CpbDispersion || c == Command::CpbAnharmonicity;
}

void require(bool ok, const std::string& message) {
    if (!ok) throw ValidationError(message);
}

/// Range checks that do not need any computation; run on every sweep point.
void check_point(const RunConfig& c) {
    try {
        if (c.command == Command::OracleCompare) {
            if (c.text("target") == "cpb") {
                cpb_params(c);
            } else {
                junction_params(c);
            }
        } else if (is_cpb(c.command)) {
            cpb_params(c);
        } else {
            junction_params(c);
        }
    } catch (const std::invalid_argument& e) {
        throw ValidationError(e.what());
    }
    const auto& p = c.parameters;
    if (p.count("n_levels")) require(c.integer("n_levels") >= 1, "n_levels must be at least 1");
    if (c.command == Command::CpbAnharmonicity)
        require(c.integer("n_levels") >= 3, "cpb-anharmonicity needs n_levels >= 3");
    if (p.count("grid")) require(c.integer("grid") >= 64, "grid must be at least 64");
    if (p.count("threads")) require(c.integer("threads") >= 0, "threads must be non-negative");
    if (p.count("n_phase")) require(c.integer("n_phase") >= 4, "n_phase must be at least 4");
    if (p.count("sc_layers")) require(c.integer("sc_layers") >= 8, "sc_layers must be at least 8");
    if (p.count("draws")) require(c.integer("draws") >= 1, "draws must be at least 1");
    if (p.count("target")) {
        const auto& t = c.text("target");
        require(t == "cpb" || t == "junction", "target must be 'cpb' or 'junction'");
    }
    if (p.count("source")) {
        const auto& s = c.text("source");
        require(s == "random" || s == "junction", "source must be 'random' or 'junction'");
    }
    if (p.count("z") && c.text("z") != "mid") parse_number("z", c.text("z"));
    if (p.count("l")) {
        const int M = c.integer("M");
        require(c.integer("l") >= 1 && c.integer("l") <= M, "l must lie in 1..M");
        require(c.integer("m") >= 1 && c.integer("m") <= M, "m must lie in 1..M");
    }
}

/// Leading column naming the swept quantity, if any.
std::optional<std::string> lead_key(const RunConfig& c) {
    if (c.sweep) {
        if (c.command == Command::JunctionLevels && c.sweep->key == "phi") return std::nullopt;
        return c.sweep->key;
    }
    switch (c.command) {
        case Command::CpbLevels: return "n_g";
        case Command::CpbDispersion:
        case Command::CpbAnharmonicity: return "E_J";
        case Command::JunctionParity: return "L_F";
        default: return std::nullopt;
    }
}

struct PointResult {
    std::vector<Row> rows;
    std::vector<std::tuple<std::string, double, double>> points;  // series, x, y
    std::vector<std::string> failures;
};

PointResult cpb_levels(const RunConfig& c, double x) {
    const auto p = cpb_params(c);
    const auto levels = cpb::energies_mathieu(p, c.integer("n_levels")).levels;
    PointResult r;
    Row row{format_number(x)};
    for (std::size_t k = 0; k < levels.size(); ++k) {
        row.push_back(format_number(levels[k]));
        r.points.emplace_back("E" + std::to_string(k), x, levels[k]);
    }
    r.rows.push_back(row);
    return r;
}

PointResult cpb_dispersion(const RunConfig& c, double x) {
    const auto p = cpb_params(c);
    PointResult r;
    Row row{format_number(x), format_number(p.ratio())};
    for (int k = 0; k < c.integer("n_levels"); ++k) {
        const double eps = cpb::charge_dispersion(k, p);
        row.push_back(format_number(eps));
        r.points.emplace_back("eps" + std::to_string(k), x, eps);
    }
    r.rows.push_back(row);
    return r;
}

PointResult cpb_anharmonicity(const RunConfig& c, double x) {
    const auto p = cpb_params(c);
    const double e01 = cpb::transition_energy(p);
    const double alpha = cpb::anharmonicity(p);
    PointResult r;
    r.rows.push_back({format_number(x), format_number(p.ratio()), format_number(e01),
                      format_number(alpha), format_number(alpha / e01)});
    r.points.emplace_back("alpha/E01", x, alpha / e01);
    return r;
}

std::string channel_label(int l, int m, std::size_t n) {
    return "(" + std::to_string(l) + "," + std::to_string(m) + ") n=" + std::to_string(n);
}

PointResult junction_levels(const RunConfig& c, std::optional<double> lead) {
    const auto p = junction_params(c);
    const double phi = c.number("phi");
    const double x = lead.value_or(phi);
    PointResult r;
    for (const auto& ch : junction::channels(p)) {
        const auto levels = junction::andreev_levels(phi, ch, p, c.integer("grid"));
        for (std::size_t n = 0; n < levels.size(); ++n) {
            Row row;
            if (lead) row.push_back(format_number(*lead));
            row.insert(row.end(), {format_number(phi), integer_text(ch.l), integer_text(ch.m),
                                   integer_text(static_cast<long long>(n)),
                                   format_number(levels[n]), format_number(ch.delta_lm)});
            r.rows.push_back(row);
            r.points.emplace_back(channel_label(ch.l, ch.m, n), x,
                                  levels[n] / std::abs(ch.delta_lm));
        }
    }
    return r;
}

junction::CriticalCurrentResult current_result(const RunConfig& c) {
    const auto p = junction_params(c);
    const auto spectrum = junction::andreev_spectrum(p, c.integer("n_phase"), c.integer("grid"),
                                                     static_cast<unsigned>(c.integer("threads")));
    return junction::critical_current_and_parity(spectrum);
}

PointResult junction_current(const RunConfig& c, std::optional<double> lead) {
    const auto res = current_result(c);
    PointResult r;
    const std::string series = lead ? c.sweep->key + "=" + format_number(*lead) : "I";
    for (std::size_t j = 0; j < res.phi.size(); ++j) {
        Row row;
        if (lead) row.push_back(format_number(*lead));
        row.insert(row.end(), {format_number(res.phi[j]), format_number(res.current[j]),
                               format_number(res.free_energy[j])});
        r.rows.push_back(row);
        r.points.emplace_back(series, res.phi[j], res.current[j]);
    }
    return r;
}

PointResult junction_parity(const RunConfig& c, double x) {
    const auto res = current_result(c);
    PointResult r;
    r.rows.push_back({format_number(x), format_number(res.I_c), junction::to_string(res.type),
                      format_number(res.slope_at_zero), format_number(res.phi_min)});
    r.points.emplace_back("I_c", x, res.I_c);
    r.points.emplace_back("dI/dphi at 0", x, res.slope_at_zero);
    return r;
}

struct BasisCheck {
    double det_abs = std::numeric_limits<double>::quiet_NaN();
    double condition = std::numeric_limits<double>::quiet_NaN();
    double inverse_residual = std::numeric_limits<double>::quiet_NaN();
    double transport_residual = std::numeric_limits<double>::quiet_NaN();
    std::string status;
};

BasisCheck check_pair(const basis::AndreevBasisPair& pair) {
    BasisCheck out;
    Eigen::Matrix2cd S;
    S.col(0) = pair.state0;
    S.col(1) = pair.state1;
    out.det_abs = std::abs(S.determinant()) / (pair.state0.norm() * pair.state1.norm());
    out.condition = basis::transport_condition(pair);
    try {
        const auto t = basis::build_transform(pair);
        out.inverse_residual =
            std::max((t.matrix * pair.state0 - Eigen::Vector2cd(1.0, 0.0)).norm(),
                     (t.matrix * pair.state1 - Eigen::Vector2cd(0.0, 1.0)).norm());
        const Eigen::Vector2cd moved = basis::conjugated_pauli_x(t, pair.state0);
        out.transport_residual = (moved - pair.state1).norm() / pair.state1.norm();
        if (out.condition > basis::kWellConditioned) {
            out.status = "ill_conditioned";
            return out;
        }
        basis::transport_pauli_x(t, pair);
        out.status = "ok";
    } catch (const SingularityError&) {
        out.status = "singular";
    } catch (const CorrespondenceError&) {
        out.status = "mismatch";
    }
    return out;
}

PointResult basis_map(const RunConfig& c, std::optional<double> lead, std::uint64_t seed) {
    PointResult r;
    auto emit = [&](long long draw, double energy, double z, const BasisCheck& chk) {
        Row row;
        if (lead) row.push_back(format_number(*lead));
        row.insert(row.end(), {integer_text(draw), format_number(energy), format_number(z),
                               format_number(chk.det_abs), format_number(chk.condition),
                               format_number(chk.inverse_residual),
                               format_number(chk.transport_residual), chk.status});
        r.rows.push_back(row);
        r.points.emplace_back("transport residual", lead.value_or(static_cast<double>(draw)),
                              chk.transport_residual);
        if (chk.status == "mismatch")
            r.failures.push_back("draw " + std::to_string(draw) + ": sigma_x transport residual " +
                                 format_number(chk.transport_residual));
    };

    if (c.text("source") == "random") {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(-1.0, 1.0);
        std::uniform_real_distribution<double> momentum(-std::numbers::pi, std::numbers::pi);
        std::uniform_real_distribution<double> decay(0.0, 1.0);
        std::uniform_real_distribution<double> position(0.0, 4.0);
        const int draws = c.integer("draws");
        for (int d = 0; d < draws; ++d) {
            auto amplitude = [&] { return basis::cplx(unit(rng), unit(rng)); };
            const auto f1 = amplitude(), f2 = amplitude(), g1 = amplitude(), g2 = amplitude();
            const basis::cplx qe(momentum(rng), decay(rng)), qh(momentum(rng), decay(rng));
            const double z = position(rng);
            emit(d, std::numeric_limits<double>::quiet_NaN(), z,
                 check_pair(basis::make_basis_pair(f1, f2, g1, g2, qe, qh, z)));
        }
        return r;
    }

    const auto p = junction_params(c);
    const double phi = c.number("phi");
    const auto ch = junction::make_channel(c.integer("l"), c.integer("m"), p);
    std::optional<double> z;
    if (c.text("z") != "mid") z = c.number("z");
    const double where = z.value_or(p.lambda + 0.5 * p.L_F);
    long long draw = 0;
    for (auto spin : {junction::Spin::Up, junction::Spin::Down}) {
        for (double e : junction::andreev_levels_sector(phi, ch, p, spin, c.integer("grid"))) {
            emit(draw++, e, where, check_pair(basis::basis_pair_from_junction(e, phi, ch, p, spin, z)));
        }
    }
    if (draw == 0) throw Error("channel has no sub-gap Andreev level at this phase");
    return r;
}

Table oracle_compare(const RunConfig& c) {
    Table t;
    double worst = 0.0;
    if (c.text("target") == "cpb") {
        const auto base = cpb_params(c);
        const int n_levels = c.integer("n_levels");
        t.columns = {"EJ_over_EC", "n_g", "k", "mathieu", "charge_basis", "rel_dev"};
        for (double ratio : {1.0, 20.0, 25.0, 50.0}) {
            cpb::CpbParams p = base;
            p.E_J = ratio * p.E_C;
            for (int i = 0; i <= 10; ++i) {
                p.n_g = 0.1 * i;
                const auto a = cpb::energies_mathieu(p, n_levels).levels;
                const auto b = cpb::energies_charge_basis(p, n_levels).levels;
                for (int k = 0; k < n_levels; ++k) {
                    const double dev = std::abs(a[k] - b[k]) / std::abs(b[k]);
                    worst = std::max(worst, dev);
                    t.rows.push_back({format_number(ratio), format_number(p.n_g), integer_text(k),
                                      format_number(a[k]), format_number(b[k]),
                                      format_number(dev)});
                }
            }
        }
        if (!(worst < kCpbOracleTolerance))
            t.failure = "CPB oracle deviation " + format_number(worst) + " exceeds " +
                        format_number(kCpbOracleTolerance);
    } else {
        const auto p = junction_params(c);
        const int n_phase = c.integer("n_phase");
        t.columns = {"phi", "l", "m", "matched", "lattice", "rel_dev"};
        std::map<std::string, Series> series;
        for (int j = 0; j < n_phase; ++j) {
            const double phi = 2.0 * std::numbers::pi * j / n_phase;
            for (const auto& row :
                 junction::compare_with_lattice(phi, p, c.integer("sc_layers"), c.integer("grid"))) {
                worst = std::max(worst, row.deviation);
                t.rows.push_back({format_number(phi), integer_text(row.l), integer_text(row.m),
                                  format_number(row.matched), format_number(row.lattice),
                                  format_number(row.deviation)});
                auto& s = series["(" + std::to_string(row.l) + "," + std::to_string(row.m) + ")"];
                s.x.push_back(phi);
                s.y.push_back(row.deviation);
            }
        }
        for (auto& [name, s] : series) {
            s.name = name;
            t.plot.series.push_back(s);
        }
        if (!(worst < kLatticeOracleTolerance))
            t.failure = "lattice oracle deviation " + format_number(worst) + " exceeds " +
                        format_number(kLatticeOracleTolerance);
    }
    t.summary.push_back("max_relative_deviation = " + format_number(worst));
    t.plot.title = "oracle comparison (" + c.text("target") + ")";
    t.plot.x_label = c.text("target") == "cpb" ? "row" : "phi";
    t.plot.y_label = "relative deviation";
    if (c.text("target") == "cpb") {
        Series s{"rel_dev", {}, {}};
        for (std::size_t i = 0; i < t.rows.size(); ++i) {
            s.x.push_back(static_cast<double>(i));
            s.y.push_back(parse_number("rel_dev", t.rows[i].back()));
        }
        t.plot.series.push_back(s);
    }
    return t;
}

std::vector<std::string> command_columns(const RunConfig& c) {
    switch (c.command) {
        case Command::CpbLevels: {
            std::vector<std::string> cols;
            for (int k = 0; k < c.integer("n_levels"); ++k) cols.push_back("E" + std::to_string(k));
            return cols;
        }
        case Command::CpbDispersion: {
            std::vector<std::string> cols{"EJ_over_EC"};
            for (int k = 0; k < c.integer("n_levels"); ++k) cols.push_back("eps" + std::to_string(k));
            return cols;
        }
        case Command::CpbAnharmonicity: return {"EJ_over_EC", "E01", "alpha", "alpha_rel"};
        case Command::JunctionLevels: return {"phi", "l", "m", "n", "energy", "delta_lm"};
        case Command::JunctionCurrent: return {"phi", "current", "free_energy"};
        case Command::JunctionParity: return {"I_c", "junction_type", "slope_at_zero", "phi_min"};
        case Command::BasisMap:
            return {"draw", "energy", "z", "det_rel", "condition", "inverse_residual", "transport_residual", "status"};
        case Command::OracleCompare: return {};
    }
    return {};
}

void plot_labels(const RunConfig& c, PlotSpec& plot, const std::optional<std::string>& lead) {
    plot.title = to_string(c.command);
    plot.x_label = lead.value_or(c.command == Command::BasisMap ? "draw" : "phi");
    switch (c.command) {
        case Command::CpbLevels: plot.y_label = "E_k"; break;
        case Command::CpbDispersion: plot.y_label = "eps_k"; break;
        case Command::CpbAnharmonicity: plot.y_label = "alpha / E01"; break;
        case Command::JunctionLevels: plot.y_label = "E / |Delta_lm|"; break;
        case Command::JunctionCurrent:
            plot.x_label = "phi";
            plot.y_label = "I";
            break;
        case Command::JunctionParity: plot.y_label = "value"; break;
        case Command::BasisMap: plot.y_label = "transport residual"; break;
        case Command::OracleCompare: break;
    }
}

PointResult compute_point(const RunConfig& c, std::optional<double> lead, std::uint64_t seed) {
    const double x = lead.value_or(0.0);
    switch (c.command) {
        case Command::CpbLevels: return cpb_levels(c, x);
        case Command::CpbDispersion: return cpb_dispersion(c, x);
        case Command::CpbAnharmonicity: return cpb_anharmonicity(c, x);
        case Command::JunctionLevels: return junction_levels(c, lead);
        case Command::JunctionCurrent: return junction_current(c, lead);
        case Command::JunctionParity: return junction_parity(c, x);
        case Command::BasisMap: return basis_map(c, lead, seed);
        case Command::OracleCompare: break;
    }
    throw ValidationError("command has no per-point computation");
}

template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers =
        std::min<std::size_t>(n, std::max(1u, std::thread::hardware_concurrency()));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"' || ch == '\\') out += '\\';
        if (ch == '\n') {
            out += "\\n";
            continue;
        }
        out += ch;
    }
    return out + "\"";
}

void report(std::ostream& err, int code, const char* kind, const std::string& message) {
    err << "error code=" << code << " kind=" << kind << " message=" << quote(message) << '\n';
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open '" + path + "' for writing");
    f << text;
    f.close();
    if (!f) throw IoError("failed writing '" + path + "'");
}

}  // namespace

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Table execute(const RunConfig& config) {
    std::vector<RunConfig> points;
    std::vector<std::optional<double>> leads;
    const auto lead = lead_key(config);
    if (config.sweep) {
        if (config.command == Command::OracleCompare)
            throw ValidationError("oracle-compare runs a fixed grid and takes no sweep");
        for (int i = 0; i < config.sweep->steps; ++i) {
            const double v = config.sweep->value(i);
            points.push_back(config.with(config.sweep->key, v));
            leads.push_back(lead ? std::optional<double>(v) : std::nullopt);
        }
    } else {
        points.push_back(config);
        leads.push_back(lead ? std::optional<double>(config.number(*lead)) : std::nullopt);
    }
    for (const auto& p : points) check_point(p);

    if (config.command == Command::OracleCompare) return oracle_compare(config);

    std::vector<PointResult> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        try {
            results[i] = compute_point(points[i], leads[i], config.seed + i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    });
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    Table t;
    if (lead) t.columns.push_back(*lead);
    for (auto& col : command_columns(config)) t.columns.push_back(col);
    plot_labels(config, t.plot, lead);
    std::map<std::string, std::size_t> index;
    for (auto& r : results) {
        for (auto& row : r.rows) t.rows.push_back(std::move(row));
        for (const auto& [name, x, y] : r.points) {
            auto [it, fresh] = index.emplace(name, t.plot.series.size());
            if (fresh) t.plot.series.push_back(Series{name, {}, {}});
            t.plot.series[it->second].x.push_back(x);
            t.plot.series[it->second].y.push_back(y);
        }
        if (!r.failures.empty() && !t.failure) t.failure = r.failures.front();
    }
    if (config.command == Command::BasisMap) {
        std::size_t ok = 0, ill = 0, singular = 0, mismatch = 0;
        for (const auto& row : t.rows) {
            const auto& s = row.back();
            ok += s == "ok";
            ill += s == "ill_conditioned";
            singular += s == "singular";
            mismatch += s == "mismatch";
        }
        t.summary.push_back("ok = " + std::to_string(ok) + ", ill_conditioned = " + std::to_string(ill) +
                            ", singular = " + std::to_string(singular) +
                            ", mismatch = " + std::to_string(mismatch));
    }
    t.summary.push_back("rows = " + std::to_string(t.rows.size()));
    return t;
}

std::string format_csv(const RunConfig& config, const Table& table) {
    std::ostringstream out;
    out << "# qspectra " << to_string(config.command) << '\n';
    for (const auto& line : describe(config)) out << "# " << line << '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        out << (i ? "," : "") << table.columns[i];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << '\n';
    }
    return out.str();
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    Table table;
    try {
        table = execute(config);
    } catch (const ValidationError& e) {
        report(err, kExitValidation, "validation", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        report(err, kExitValidation, "validation", e.what());
        return kExitValidation;
    } catch (const std::out_of_range& e) {
        report(err, kExitValidation, "validation", e.what());
        return kExitValidation;
    } catch (const IoError& e) {
        report(err, kExitIo, "io", e.what());
        return kExitIo;
    } catch (const std::exception& e) {
        report(err, kExitComputation, "computation", e.what());
        return kExitComputation;
    }

    try {
        write_file(config.csv_path, format_csv(config, table));
        if (config.svg_path) write_file(*config.svg_path, render_svg(table.plot));
    } catch (const IoError& e) {
        report(err, kExitIo, "io", e.what());
        return kExitIo;
    }
    for (const auto& line : table.summary) out << line << '\n';
    if (table.failure) {
        report(err, kExitComputation, "computation", *table.failure);
        return kExitComputation;
    }
    return kExitOk;
}

}  // namespace qspectra::cli
