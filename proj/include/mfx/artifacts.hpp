#pragma once

// In-memory builders for every file the command line writes. Each builder is
// a pure function of the configuration, so running it twice must give the
// same bytes; the writers in cli.hpp only copy these strings to disk.

#include "mfx/analytic_spectra.hpp"
#include "mfx/config.hpp"
#include "mfx/io.hpp"
#include "mfx/measures.hpp"
#include "mfx/partition.hpp"
#include "mfx/sampling.hpp"
#include "mfx/spectra_report.hpp"

#include "json.hpp"

#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace mfx {

/// File name -> content.
using Artifacts = std::map<std::string, std::string>;

namespace detail {

inline nlohmann::ordered_json file_header(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    j["config_hash"] = cfg.hash();
    j["tool_version"] = io::kToolVersion;
    return j;
}

inline std::string dump(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

} // namespace detail

// ---------------------------------------------------------------- partition

inline nlohmann::ordered_json envelope_json(const ExperimentConfig& cfg, double q) {
    const auto mu = cfg.mu();
    const auto env = subsequence_envelope(mu, q, cfg.partition.n_min, cfg.partition.n_max);
    const auto& s = mu.schedule();
    nlohmann::ordered_json j;
    j["q"] = q;
    j["n_min"] = cfg.partition.n_min;
    j["n_max"] = cfg.partition.n_max;
    j["lim_inf_est"] = env.lim_inf_est;
    j["lim_sup_est"] = env.lim_sup_est;
    j["width"] = env.width();
    j["argmin_n"] = env.argmin_n;
    j["argmin_phase"] = to_string(s.phase(env.argmin_n));
    j["argmax_n"] = env.argmax_n;
    j["argmax_phase"] = to_string(s.phase(env.argmax_n));
    return j;
}

[[nodiscard]] inline Artifacts partition_artifacts(const ExperimentConfig& cfg) {
    const auto mu = cfg.mu();
    const std::string hash = cfg.hash();
    io::CsvWriter csv(hash);
    csv.header({"n", "q", "log2_sum", "tau_hat", "a_n"});
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    nlohmann::ordered_json envelopes = nlohmann::ordered_json::array();

    for (double q : cfg.partition.q) {
        for (std::size_t n = cfg.partition.n_min; n <= cfg.partition.n_max; ++n) {
            const auto st = level_stats(mu, q, n);
            csv.row({std::to_string(n), io::format_double(q), io::format_double(st.log2_sum),
                     io::format_double(st.tau_hat), std::to_string(st.a_n)});
            rows.push_back({n, q, st.log2_sum, st.tau_hat, st.a_n});
        }
        envelopes.push_back(envelope_json(cfg, q));
    }

    nlohmann::ordered_json summary = detail::file_header(cfg);
    summary["envelopes"] = envelopes;
    csv.comment("envelope " + summary.dump());

    Artifacts out;
    if (cfg.output.csv()) {
        out["partition.csv"] = csv.str();
    }
    if (cfg.output.json()) {
        nlohmann::ordered_json j = detail::file_header(cfg);
        j["schedule"] = cfg.measure.schedule;
        j["p"] = cfg.measure.p;
        j["p_tilde"] = cfg.measure.p_tilde;
        j["columns"] = {"n", "q", "log2_sum", "tau_hat", "a_n"};
        j["rows"] = rows;
        j["envelopes"] = envelopes;
        out["partition.json"] = detail::dump(j);
    }
    return out;
}

// ---------------------------------------------------------------- spectrum

[[nodiscard]] inline SpectrumTable spectrum_table(const ExperimentConfig& cfg) {
    const auto pair = cfg.pair();
    const auto grid = uniform_alpha_grid(pair, cfg.grids.alpha_count);
    SpectrumOptions opt;
    opt.q_min = cfg.grids.q_min;
    opt.q_max = cfg.grids.q_max;
    opt.q_step = cfg.grids.q_step;
    return build_spectrum(pair, grid, opt);
}

[[nodiscard]] inline Artifacts spectrum_artifacts(const ExperimentConfig& cfg, const SpectrumTable& table) {
    const std::vector<std::string> columns{"alpha", "q",  "q_tilde", "h_r", "h_r_tilde",    "b_star",
                                           "B_star", "c1", "c2",      "c3",  "packing_valid"};
    io::CsvWriter csv(cfg.hash());
    csv.header(columns);
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    const auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
    for (const auto& r : table.rows) {
        const auto& br = r.branch;
        csv.row({io::format_double(br.alpha), io::format_double(br.q), io::format_double(br.q_tilde),
                 io::format_double(br.h_r), io::format_double(br.h_r_tilde), io::format_double(r.b_star),
                 io::format_double(r.B_star), flag(r.conditions.c1), flag(r.conditions.c2), flag(r.conditions.c3),
                 flag(r.packing_valid)});
        nlohmann::ordered_json row;
        row["alpha"] = br.alpha;
        row["r"] = r.r;
        row["r_tilde"] = r.r_tilde;
        row["q"] = br.q;
        row["q_tilde"] = br.q_tilde;
        row["h_r"] = br.h_r;
        row["h_r_tilde"] = br.h_r_tilde;
        row["b_star"] = r.b_star;
        row["B_star"] = r.B_star;
        row["b_star_error"] = r.b_star_error;
        row["B_star_error"] = r.B_star_error;
        row["c1"] = r.conditions.c1;
        row["c2"] = r.conditions.c2;
        row["c3"] = r.conditions.c3;
        row["packing_valid"] = r.packing_valid;
        rows.push_back(row);
    }
    for (const auto& d : table.dropped) {
        csv.comment("dropped alpha=" + io::format_double(d.alpha) + " reason=" + d.reason);
    }

    Artifacts out;
    if (cfg.output.csv()) {
        out["spectrum.csv"] = csv.str();
    }
    if (cfg.output.json()) {
        nlohmann::ordered_json j = detail::file_header(cfg);
        j["pair"] = {{"p", table.pair.p()}, {"p_tilde", table.pair.p_tilde()}};
        j["schedule"] = cfg.measure.schedule;
        j["grids"] = {{"q_min", table.q_min},
                      {"q_max", table.q_max},
                      {"q_step", table.q_step},
                      {"alpha_count", cfg.grids.alpha_count}};
        const auto e = B_endpoints(table.pair);
        j["excluded"] = {{e.minus_Br0, e.minus_Bl0}, {e.minus_Br1, e.minus_Bl1}};
        j["rows"] = rows;
        nlohmann::ordered_json dropped = nlohmann::ordered_json::array();
        for (const auto& d : table.dropped) {
            dropped.push_back({{"alpha", d.alpha}, {"reason", d.reason}});
        }
        j["dropped"] = dropped;
        out["spectrum.json"] = detail::dump(j);
    }
    return out;
}

[[nodiscard]] inline Artifacts spectrum_artifacts(const ExperimentConfig& cfg) {
    return spectrum_artifacts(cfg, spectrum_table(cfg));
}

// ---------------------------------------------------------------- sampling

inline constexpr std::size_t kReportDepths[] = {100, 720, 5039};

/// Trace depths: the fixed report depths, every block end, and the sampled
/// depth itself, restricted to [1, depth].
[[nodiscard]] inline std::vector<std::size_t> trace_depths(const PhaseSchedule& schedule, std::size_t depth) {
    std::set<std::size_t> s;
    for (std::size_t d : kReportDepths) {
        if (d <= depth) {
            s.insert(d);
        }
    }
    for (std::size_t d : schedule.block_ends(depth)) {
        s.insert(d);
    }
    s.insert(depth);
    return {s.begin(), s.end()};
}

struct SampleRun {
    double alpha = 0.0; ///< exponent targeted by nu: alpha_of_r(r, p)
    double r = 0.0;
    double r_tilde = 0.0;
    std::vector<std::size_t> depths;
    std::vector<ExponentTrace> traces;
    std::vector<LevelSetVerdict> verdicts;
};

[[nodiscard]] inline SampleRun run_sampling(const ExperimentConfig& cfg) {
    const auto mu = cfg.mu();
    const auto nu = cfg.nu_measure();
    SampleRun run;
    run.r = cfg.nu.r;
    run.r_tilde = cfg.r_tilde();
    run.alpha = alpha_of_r(run.r, cfg.measure.p);
    run.depths = trace_depths(mu.schedule(), cfg.sampling.depth);
    run.traces =
        sample_traces(mu, nu, cfg.sampling.paths, cfg.sampling.depth, cfg.sampling.seed, run.depths);
    const auto window = tail_depths(mu.schedule(), cfg.sampling.depth);
    for (const auto& tr : run.traces) {
        run.verdicts.push_back(level_set_classifier(tr, run.alpha, run.alpha, cfg.sampling.tol, window));
    }
    return run;
}

struct DepthSummary {
    std::size_t depth = 0;
    double mu_mean = 0.0;
    double mu_expected = 0.0;
    double mu_band = 0.0; ///< 3 standard errors
    double nu_mean = 0.0;
    double nu_expected = 0.0;
    double nu_band = 0.0;
    double mu_min = 0.0;
    double mu_max = 0.0;
};

inline constexpr double kBandSigmas = 3.0;

[[nodiscard]] inline std::vector<DepthSummary> summarize_depths(const ExperimentConfig& cfg, const SampleRun& run) {
    const auto mu = cfg.mu();
    const auto nu = cfg.nu_measure();
    std::vector<DepthSummary> out;
    const double paths = static_cast<double>(run.traces.size());
    for (std::size_t k = 0; k < run.depths.size(); ++k) {
        DepthSummary s;
        s.depth = run.depths[k];
        s.mu_min = std::numeric_limits<double>::infinity();
        s.mu_max = -std::numeric_limits<double>::infinity();
        for (const auto& tr : run.traces) {
            s.mu_mean += tr.mu_exponents[k];
            s.nu_mean += tr.nu_exponents[k];
            s.mu_min = std::min(s.mu_min, tr.mu_exponents[k]);
            s.mu_max = std::max(s.mu_max, tr.mu_exponents[k]);
        }
        if (paths > 0) {
            s.mu_mean /= paths;
            s.nu_mean /= paths;
            const auto mm = exponent_moments(mu, nu, s.depth);
            const auto nm = exponent_moments(nu, nu, s.depth);
            s.mu_expected = mm.mean;
            s.nu_expected = nm.mean;
            s.mu_band = kBandSigmas * mm.sd / std::sqrt(paths);
            s.nu_band = kBandSigmas * nm.sd / std::sqrt(paths);
        }
        out.push_back(s);
    }
    return out;
}

[[nodiscard]] inline Artifacts sample_artifacts(const ExperimentConfig& cfg, const SampleRun& run) {
    const std::string hash = cfg.hash();
    Artifacts out;
    if (cfg.output.csv()) {
        io::CsvWriter csv(hash);
        csv.header({"seed", "depth", "mu_exponent", "nu_exponent"});
        for (const auto& tr : run.traces) {
            for (std::size_t k = 0; k < tr.depths.size(); ++k) {
                csv.row({std::to_string(tr.seed), std::to_string(tr.depths[k]), io::format_double(tr.mu_exponents[k]),
                         io::format_double(tr.nu_exponents[k])});
            }
        }
        out["traces.csv"] = csv.str();
    }
    if (cfg.output.json()) {
        nlohmann::ordered_json j = detail::file_header(cfg);
        j["rng_version"] = kRngVersion;
        j["master_seed"] = cfg.sampling.seed;
        j["depths"] = run.depths;
        nlohmann::ordered_json traces = nlohmann::ordered_json::array();
        for (const auto& tr : run.traces) {
            traces.push_back({{"seed", tr.seed}, {"mu_exponents", tr.mu_exponents}, {"nu_exponents", tr.nu_exponents}});
        }
        j["traces"] = traces;
        out["traces.json"] = detail::dump(j);
    }

    nlohmann::ordered_json s = detail::file_header(cfg);
    s["rng_version"] = kRngVersion;
    s["master_seed"] = cfg.sampling.seed;
    s["paths"] = run.traces.size();
    s["depth"] = cfg.sampling.depth;
    s["r"] = run.r;
    s["r_tilde"] = run.r_tilde;
    s["alpha"] = run.alpha;
    s["h_r"] = entropy_h(run.r);
    s["h_r_tilde"] = entropy_h(run.r_tilde);
    s["tol"] = cfg.sampling.tol;
    s["classification_depths"] = tail_depths(cfg.schedule(), cfg.sampling.depth);
    std::map<std::string, std::size_t> counts{{"in_both", 0}, {"in_lower", 0}, {"in_upper", 0}, {"undetermined", 0}};
    nlohmann::ordered_json verdicts = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < run.traces.size(); ++i) {
        ++counts[to_string(run.verdicts[i])];
        verdicts.push_back({{"seed", run.traces[i].seed}, {"verdict", to_string(run.verdicts[i])}});
    }
    s["verdict_counts"] = counts;
    nlohmann::ordered_json depths = nlohmann::ordered_json::array();
    for (const auto& d : summarize_depths(cfg, run)) {
        depths.push_back({{"depth", d.depth},
                          {"mu_mean", d.mu_mean},
                          {"mu_expected", d.mu_expected},
                          {"mu_band", d.mu_band},
                          {"mu_min", d.mu_min},
                          {"mu_max", d.mu_max},
                          {"nu_mean", d.nu_mean},
                          {"nu_expected", d.nu_expected},
                          {"nu_band", d.nu_band}});
    }
    s["envelope"] = depths;
    s["verdicts"] = verdicts;
    out["sample_summary.json"] = detail::dump(s);
    return out;
}

[[nodiscard]] inline Artifacts sample_artifacts(const ExperimentConfig& cfg) {
    return sample_artifacts(cfg, run_sampling(cfg));
}

} // namespace mfx
