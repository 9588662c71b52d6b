// SPDX-License-Identifier: Apache-2.0

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "lgas/dynamics.hpp"
#include "lgas/gas_config.hpp"
#include "lgas/horizons.hpp"
#include "lgas/montecarlo.hpp"
#include "lgas/theory.hpp"
#include "lgas/version.hpp"

namespace lgas::cli {

namespace {

using nlohmann::json;

class Exit : public std::runtime_error {
public:
    Exit(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

std::string num(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return {buf, res.ptr};
}

GasConfig checked_config(int d, double r) {
    try {
        return GasConfig::make(d, r);
    } catch (const std::invalid_argument& e) {
        throw Exit(kInvalidFlags, e.what());
    }
}

json matrix_json(const theory::SuperdiffusionMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.dim; ++i) {
        json row = json::array();
        for (int j = 0; j < m.dim; ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

const char* kUnits = "# units: lengths in lattice spacings, times in lattice spacings over unit speed\n";

// --- horizons ----------------------------------------------------------------

struct HorizonArgs {
    int dim = 0;
    double radius = 0.0;
    std::string format = "csv";
};

int cmd_horizons(const HorizonArgs& a, std::ostream& out) {
    const GasConfig cfg = checked_config(a.dim, a.radius);
    const auto set = horizons::principal_horizons(cfg.dim, cfg.radius);
    if (set.incipient_or_closed) {
        throw Exit(kIncipientOrClosed, "incipient-or-closed: no principal horizon of positive width for r >= 1/2");
    }
    const int d = cfg.dim;
    if (a.format == "json") {
        json rows = json::array();
        for (const auto& h : set.horizons) {
            rows.push_back({{"vector", h.vector.coords},
                            {"L", h.norm},
                            {"width", h.width},
                            {"perp_covolume", h.perp_covolume},
                            {"normal", h.normal}});
        }
        out << json{{"dim", d}, {"radius", cfg.radius}, {"count", set.horizons.size()}, {"horizons", rows}}.dump(2)
            << '\n';
        return kOk;
    }
    out << "# lgas horizons\n# schema: lgas-horizons/1\n" << kUnits;
    out << "# dim: " << d << "\n# radius: " << num(cfg.radius) << "\n# count: " << set.horizons.size() << '\n';
    out << "# columns: l_i = dual lattice vector (inversion representative); L = |l|; width = 1/L - 2r; "
           "perp_covolume = covolume of the projected lattice; n_i = l / L\n";
    for (int i = 1; i <= d; ++i) out << "l_" << i << ',';
    out << "L,width,perp_covolume";
    for (int i = 1; i <= d; ++i) out << ",n_" << i;
    out << '\n';
    for (const auto& h : set.horizons) {
        for (int c : h.vector.coords) out << c << ',';
        out << num(h.norm) << ',' << num(h.width) << ',' << num(h.perp_covolume);
        for (double c : h.normal) out << ',' << num(c);
        out << '\n';
    }
    return kOk;
}

// --- theory ------------------------------------------------------------------

struct TheoryArgs {
    int dim = 0;
    double radius = 0.0;
    bool small_r_terms = false;
};

int cmd_theory(const TheoryArgs& a, std::ostream& out) {
    const GasConfig cfg = checked_config(a.dim, a.radius);
    const int d = cfg.dim;
    json report{{"dim", d}, {"radius", cfg.radius}, {"packing", cfg.packing}};

    if (cfg.radius >= 0.5) {
        report["regime"] = "incipient-or-closed";
        if (cfg.radius == 0.5 && d >= 3) {
            const auto e = theory::conjectured_incipient_exponent(d);
            report["classification"] = e.label;
            report["alpha_range"] = {e.alpha_low, e.alpha_high};
        } else {
            report["classification"] = "no principal horizon";
        }
        out << report.dump(2) << '\n';
        return kIncipientOrClosed;
    }

    const double ffa = theory::free_flight_asymptote(cfg);
    const auto D = theory::superdiffusion_matrix(cfg);
    const auto xi = theory::discrete_covariance(cfg);
    const double tau = theory::mean_free_time(cfg);
    double xi_residual = 0.0;
    for (std::size_t k = 0; k < xi.entries.size(); ++k) {
        xi_residual = std::max(xi_residual, std::fabs(xi.entries[k] - tau * D.entries[k]));
    }
    report["regime"] = "principal-horizons";
    report["horizon_count"] = horizons::principal_horizons(d, cfg.radius).horizons.size();
    report["free_flight_asymptote"] = ffa;
    report["superdiffusion_matrix"] = matrix_json(D);
    report["superdiffusion_scalar"] = D.scalar;
    report["mean_free_time"] = tau;
    report["xi_disc"] = matrix_json(xi);
    report["xi_disc_diag"] = xi(0, 0);
    report["identity_residual"] = std::fabs(D.trace() - ffa);
    report["xi_identity_residual"] = xi_residual;
    if (a.small_r_terms) {
        const double lead = theory::small_r_leading(d, cfg.radius);
        const double lin = theory::small_r_linear_correction(d);
        report["small_r"] = {{"leading", lead},
                             {"linear_coefficient", lin},
                             {"leading_plus_linear", lead + lin * cfg.radius},
                             {"superdiffusion_leading", theory::small_r_superdiffusion_leading(d, cfg.radius)}};
    }
    out << report.dump(2) << '\n';
    return kOk;
}

// --- simulate ----------------------------------------------------------------

struct SimulateArgs {
    std::string mode = "survival";
    int dim = 0;
    double radius = 0.0;
    std::uint64_t samples = 100000;
    double tmax = 1000.0;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::uint64_t chunk = mc::kDefaultChunk;
    std::string out;
    std::vector<double> lags;
    std::vector<double> times;
    double origin_window = 0.0;
    std::size_t bins = 0;
};

json parameters_json(const SimulateArgs& a) {
    return {{"mode", a.mode},     {"dim", a.dim},   {"radius", a.radius},   {"samples", a.samples},
            {"tmax", a.tmax},     {"seed", a.seed}, {"threads", a.threads}, {"chunk", a.chunk},
            {"lags", a.lags},     {"times", a.times}, {"origin_window", a.origin_window}, {"bins", a.bins},
            {"out", a.out}};
}

SimulateArgs parameters_from_json(const json& p) {
    SimulateArgs a;
    a.mode = p.at("mode").get<std::string>();
    a.dim = p.at("dim").get<int>();
    a.radius = p.at("radius").get<double>();
    a.samples = p.at("samples").get<std::uint64_t>();
    a.tmax = p.at("tmax").get<double>();
    a.seed = p.at("seed").get<std::uint64_t>();
    a.threads = p.value("threads", 0u);
    a.chunk = p.value("chunk", mc::kDefaultChunk);
    a.lags = p.value("lags", std::vector<double>{});
    a.times = p.value("times", std::vector<double>{});
    a.origin_window = p.value("origin_window", 0.0);
    a.bins = p.value("bins", std::size_t{0});
    a.out = p.value("out", std::string{});
    return a;
}

std::vector<double> default_lags(double tmax) {
    std::vector<double> lags{0.0};
    for (double t : {1.0, 2.0, 5.0, 10.0, 20.0}) {
        if (t <= tmax) lags.push_back(t);
    }
    for (double t = 25.0; t <= tmax * (1 + 1e-12); t += 25.0) lags.push_back(t);
    return lags;
}

std::vector<double> default_times(double tmax) {
    std::vector<double> times;
    for (int k = 0;; ++k) {
        const double t = std::pow(10.0, -1.0 + k / 5.0);
        if (t >= tmax * (1 - 1e-12)) break;
        times.push_back(t);
    }
    times.push_back(tmax);
    return times;
}

void write_common_header(std::ostream& out, const SimulateArgs& a) {
    out << "# lgas simulate " << a.mode << "\n# schema: lgas-" << a.mode << "/1\n" << kUnits;
    out << "# dim: " << a.dim << "\n# radius: " << num(a.radius) << "\n# samples: " << a.samples
        << "\n# tmax: " << num(a.tmax) << "\n# seed: " << a.seed << "\n# chunk: " << a.chunk << '\n';
}

void write_survival(std::ostream& out, const SimulateArgs& a, const mc::SurvivalCurve& c) {
    write_common_header(out, a);
    out << "# columns: t = threshold time; survivors = #{first collision time >= t}; F = survivors / samples; "
           "stderr = sqrt(F (1 - F) / samples)\n";
    out << "t,survivors,F,stderr\n";
    for (std::size_t k = 0; k < c.times.size(); ++k) {
        out << num(c.times[k]) << ',' << c.survivors[k] << ',' << num(c.estimate[k]) << ',' << num(c.stderr_[k])
            << '\n';
    }
}

void write_vacf(std::ostream& out, const SimulateArgs& a, const mc::CorrelationSeries& c) {
    write_common_header(out, a);
    out << "# origin_window: " << num(c.origin_window) << '\n';
    out << "# columns: lag = time; vacf = <v(0).v(lag)>; stderr = standard error over independent trajectories; "
           "t_vacf = lag * vacf\n";
    out << "lag,vacf,stderr,t_vacf\n";
    for (std::size_t j = 0; j < c.lags.size(); ++j) {
        out << num(c.lags[j]) << ',' << num(c.values[j]) << ',' << num(c.stderr_[j]) << ','
            << num(c.lags[j] * c.values[j]) << '\n';
    }
}

void write_msd(std::ostream& out, const SimulateArgs& a, const mc::MsdSeries& m) {
    write_common_header(out, a);
    out << "# columns: t = time; msd = <|D|^2>; msd_stderr; scaled = msd / (2 d t ln t) (nan for t <= 1); "
           "scaled_stderr; m_i_j = <D_i D_j>\n";
    out << "t,msd,msd_stderr,scaled,scaled_stderr";
    for (int i = 1; i <= m.dim; ++i) {
        for (int j = 1; j <= m.dim; ++j) out << ",m_" << i << '_' << j;
    }
    out << '\n';
    for (std::size_t k = 0; k < m.times.size(); ++k) {
        out << num(m.times[k]) << ',' << num(m.msd[k]) << ',' << num(m.msd_stderr[k]) << ',' << num(m.scaled[k])
            << ',' << num(m.scaled_stderr[k]);
        for (double v : m.second_moment[k]) out << ',' << num(v);
        out << '\n';
    }
}

void write_dist(std::ostream& out, const SimulateArgs& a, const mc::DisplacementHistogram& h) {
    write_common_header(out, a);
    out << "# time: " << num(h.time) << "\n# scale: " << num(h.scale)
        << "\n# reference_variance: " << num(h.reference_variance) << "\n# ks_distance: " << num(h.ks_distance)
        << "\n# mass_beyond_6sigma: " << num(h.mass_beyond_6sigma) << '\n';
    out << "# columns: x = D_1 / sqrt(t ln t) bin [bin_low, bin_high); count; density = count / (samples * width); "
           "reference_density = normal density with variance reference_variance at bin centre\n";
    out << "bin_low,bin_high,count,density,reference_density\n";
    for (std::size_t b = 0; b < h.counts.size(); ++b) {
        out << num(h.edges[b]) << ',' << num(h.edges[b + 1]) << ',' << h.counts[b] << ',' << num(h.density[b])
            << ',' << num(h.reference_density[b]) << '\n';
    }
}

json report_json(const mc::RunReport& r, std::uint64_t samples) {
    json workers = json::array();
    for (unsigned w = 0; w < r.worker_chunks.size(); ++w) {
        json ranges = json::array();
        for (std::uint64_t c : r.worker_chunks[w]) {
            ranges.push_back({c * r.chunk, std::min(samples, (c + 1) * r.chunk)});
        }
        workers.push_back({{"worker", w}, {"stream_ranges", ranges}});
    }
    return workers;
}

int cmd_simulate(SimulateArgs a, std::ostream& out) {
    const GasConfig cfg = checked_config(a.dim, a.radius);
    if (a.samples < 1) throw Exit(kInvalidFlags, "--samples must be at least 1");
    if (!(a.tmax > 0.0) || !std::isfinite(a.tmax)) throw Exit(kInvalidFlags, "--tmax must be positive");
    if (a.out.empty()) throw Exit(kInvalidFlags, "--out is required");
    if (a.mode == "dist" && !(a.tmax > std::exp(1.0))) throw Exit(kInvalidFlags, "dist mode needs --tmax > e");
    if (a.mode == "vacf" && a.lags.empty()) a.lags = default_lags(a.tmax);
    if (a.mode == "msd" && a.times.empty()) a.times = default_times(a.tmax);

    mc::RunReport report;
    mc::RunOptions opts{a.seed, a.threads, a.chunk, &report};
    std::ostringstream csv;
    const auto start = std::chrono::steady_clock::now();
    try {
        if (a.mode == "survival") {
            write_survival(csv, a, mc::estimate_survival(cfg, a.samples, a.tmax, opts));
        } else if (a.mode == "vacf") {
            write_vacf(csv, a, mc::estimate_vacf(cfg, a.samples, a.lags, opts, {a.origin_window}));
        } else if (a.mode == "msd") {
            write_msd(csv, a, mc::estimate_msd(cfg, a.samples, a.times, opts));
        } else if (a.mode == "dist") {
            write_dist(csv, a, mc::scaled_displacement_histogram(cfg, a.samples, a.tmax, opts, a.bins));
        } else {
            throw Exit(kInvalidFlags, "unknown mode " + a.mode);
        }
    } catch (const dynamics::DegenerateGeometryError& e) {
        throw Exit(kDegenerateGeometry, std::string("degenerate geometry: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw Exit(kInvalidFlags, e.what());
    }
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    std::ofstream file(a.out, std::ios::binary);
    if (!file) throw Exit(kFailure, "cannot write " + a.out);
    file << csv.str();
    file.close();

    const json manifest{{"schema", "lgas-manifest/1"},
                        {"command", "simulate"},
                        {"parameters", parameters_json(a)},
                        {"seed", a.seed},
                        {"code_version", kVersion},
                        {"wall_time_seconds", wall},
                        {"workers", report.workers},
                        {"stream_rule", "sample i draws from Philox stream (seed, i)"},
                        {"worker_streams", report_json(report, a.samples)},
                        {"output", a.out}};
    std::ofstream side(a.out + ".manifest.json");
    if (!side) throw Exit(kFailure, "cannot write " + a.out + ".manifest.json");
    side << manifest.dump(2) << '\n';
    out << "wrote " << a.out << " and " << a.out << ".manifest.json\n";
    return kOk;
}

int cmd_simulate_from_manifest(const std::string& path, const std::string& out_override, std::ostream& out) {
    std::ifstream in(path);
    if (!in) throw Exit(kInvalidFlags, "cannot open manifest " + path);
    SimulateArgs a;
    try {
        a = parameters_from_json(json::parse(in).at("parameters"));
    } catch (const json::exception& e) {
        throw Exit(kInvalidFlags, std::string("malformed manifest: ") + e.what());
    }
    if (!out_override.empty()) a.out = out_override;
    return cmd_simulate(std::move(a), out);
}

// --- fit ---------------------------------------------------------------------

struct FitArgs {
    std::string in;
    std::uint64_t samples = 0;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
    std::ifstream in(a.in);
    if (!in) throw Exit(kFitFailure, "cannot open " + a.in);
    std::uint64_t samples = a.samples;
    std::vector<std::string> header;
    mc::SurvivalCurve curve;
    std::string line;
    std::size_t t_col = 0;
    std::size_t f_col = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.rfind("# samples: ", 0) == 0 && samples == 0) samples = std::stoull(line.substr(11));
            continue;
        }
        if (header.empty()) {
            header = split_csv(line);
            const auto find = [&](const std::string& name) {
                for (std::size_t i = 0; i < header.size(); ++i) {
                    if (header[i] == name) return i;
                }
                throw Exit(kFitFailure, a.in + ": missing column " + name);
            };
            t_col = find("t");
            f_col = find("F");
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != header.size()) throw Exit(kFitFailure, a.in + ": ragged row");
        try {
            curve.times.push_back(std::stod(cells[t_col]));
            curve.estimate.push_back(std::stod(cells[f_col]));
        } catch (const std::logic_error&) {
            throw Exit(kFitFailure, a.in + ": unparsable number in row");
        }
    }
    if (header.empty()) throw Exit(kFitFailure, a.in + ": no data");
    if (samples == 0) throw Exit(kInvalidFlags, "sample count unknown; pass --samples");
    curve.samples = samples;

    const auto [lo, hi] = mc::standard_fit_window(samples);
    try {
        const auto fit = mc::fit_exponent(curve, lo, hi);
        out << json{{"alpha", fit.alpha},
                    {"stderr", fit.stderr_},
                    {"window", {fit.window_low, fit.window_high}},
                    {"residual", fit.residual},
                    {"bins_used", fit.bins_used},
                    {"samples", samples},
                    {"weighting", fit.weighting},
                    {"input", a.in}}
                   .dump(2)
            << '\n';
    } catch (const mc::FitError& e) {
        throw Exit(kFitFailure, e.what());
    }
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Superdiffusion and free flights in the cubic Lorentz gas", "lgas"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(kVersion));

    HorizonArgs hz;
    auto* horizons_cmd = app.add_subcommand("horizons", "List principal horizons");
    horizons_cmd->add_option("--dim", hz.dim, "Dimension d >= 2")->required();
    horizons_cmd->add_option("--radius", hz.radius, "Scatterer radius r in (0, 1)")->required();
    horizons_cmd->add_option("--format", hz.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

    TheoryArgs th;
    auto* theory_cmd = app.add_subcommand("theory", "Closed-form predictions as JSON");
    theory_cmd->add_option("--dim", th.dim, "Dimension d >= 2")->required();
    theory_cmd->add_option("--radius", th.radius, "Scatterer radius r in (0, 1)")->required();
    theory_cmd->add_flag("--small-r-terms", th.small_r_terms, "Include the small-r expansion terms");

    SimulateArgs sim;
    std::string manifest;
    auto* sim_cmd = app.add_subcommand("simulate", "Run an estimator and write CSV plus a JSON manifest");
    sim_cmd->add_option("--mode", sim.mode, "Estimator")->check(CLI::IsMember({"survival", "vacf", "msd", "dist"}));
    sim_cmd->add_option("--dim", sim.dim, "Dimension d >= 2");
    sim_cmd->add_option("--radius", sim.radius, "Scatterer radius r in (0, 1)");
    sim_cmd->add_option("--samples", sim.samples, "Number of trajectories");
    sim_cmd->add_option("--tmax", sim.tmax, "Survival cap, largest lag or time, or histogram time");
    sim_cmd->add_option("--seed", sim.seed, "Random seed");
    sim_cmd->add_option("--threads", sim.threads, "Worker threads (0 = automatic)");
    sim_cmd->add_option("--chunk", sim.chunk, "Samples per work chunk")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--out", sim.out, "Output CSV path");
    sim_cmd->add_option("--lags", sim.lags, "vacf: lags (default 0,1,2,5,10,20 and multiples of 25)")->delimiter(',');
    sim_cmd->add_option("--times", sim.times, "msd: times (default 5 per decade from 0.1)")->delimiter(',');
    sim_cmd->add_option("--origin-window", sim.origin_window, "vacf: time-origin averaging window")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--bins", sim.bins, "dist: bin count (0 = a tenth of the reference sigma)");
    auto* from_manifest = sim_cmd->add_option("--from-manifest", manifest, "Re-run from a manifest sidecar");

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit the survival tail exponent in the window (1e2/n, 1e4/n)");
    fit_cmd->add_option("--in", fit.in, "Survival CSV")->required();
    fit_cmd->add_option("--samples", fit.samples, "Sample count n (default: from the CSV header)");

    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kVersion << '\n';
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "lgas: " << e.what() << '\n';
        return kInvalidFlags;
    }

    try {
        if (*horizons_cmd) return cmd_horizons(hz, out);
        if (*theory_cmd) return cmd_theory(th, out);
        if (*sim_cmd) {
            if (*from_manifest) return cmd_simulate_from_manifest(manifest, sim.out, out);
            if (sim.dim == 0 || sim.radius == 0.0) throw Exit(kInvalidFlags, "--dim and --radius are required");
            return cmd_simulate(sim, out);
        }
        if (*fit_cmd) return cmd_fit(fit, out);
    } catch (const Exit& e) {
        err << "lgas: " << e.what() << '\n';
        return e.code;
    } catch (const std::exception& e) {
        err << "lgas: " << e.what() << '\n';
        return kFailure;
    }
    return kInvalidFlags;
}

}  // namespace lgas::cli
