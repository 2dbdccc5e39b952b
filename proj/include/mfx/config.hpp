#pragma once

// Experiment configuration: one JSON document, validated against every
// module precondition before anything is computed.
//
//   {
//     "measure":   {"p": 0.2, "p_tilde": 0.4, "schedule": [1, 2, 6, 24, 120, 720, 5040]},
//     "nu":        {"r": 0.35, "r_tilde": 0.487...},          // r_tilde optional
//     "partition": {"q": [-2, -0.5, 0, 0.5, 1, 2], "n_min": 1, "n_max": 5039},
//     "grids":     {"q_min": -8, "q_max": 8, "q_step": 0.001, "alpha_count": 202},
//     "sampling":  {"paths": 200, "depth": 5039, "seed": 20240611, "tol": 0.03},
//     "output":    {"dir": "mfx-out", "format": "both"}
//   }
//
// Omitted keys take the defaults above. When r_tilde is omitted it is solved
// from r; when given it is used as is, so a mismatched value surfaces as a
// failed check rather than a configuration error.

#include "mfx/analytic_spectra.hpp"
#include "mfx/error.hpp"
#include "mfx/io.hpp"
#include "mfx/measures.hpp"
#include "mfx/symbolic_space.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace mfx {

class ConfigError : public Error {
public:
    using Error::Error;
};

inline constexpr const char* kOutDirEnv = "MFX_OUT_DIR";

struct MeasureConfig {
    double p = 0.2;
    double p_tilde = 0.4;
    std::vector<std::size_t> schedule{1, 2, 6, 24, 120, 720, 5040};
};

struct NuConfig {
    double r = 0.35;
    std::optional<double> r_tilde;
};

struct PartitionConfig {
    std::vector<double> q{-2.0, -0.5, 0.0, 0.5, 1.0, 2.0};
    std::size_t n_min = 1;
    std::size_t n_max = 5039;
};

struct GridConfig {
    double q_min = -8.0;
    double q_max = 8.0;
    double q_step = 1e-3;
    std::size_t alpha_count = 202;
};

struct SamplingConfig {
    std::size_t paths = 200;
    std::size_t depth = 5039;
    std::uint64_t seed = 20240611;
    double tol = 0.03;
};

struct OutputConfig {
    std::string dir = "mfx-out";
    std::string format = "both";

    [[nodiscard]] bool csv() const { return format == "csv" || format == "both"; }
    [[nodiscard]] bool json() const { return format == "json" || format == "both"; }
};

struct ExperimentConfig {
    MeasureConfig measure;
    NuConfig nu;
    PartitionConfig partition;
    GridConfig grids;
    SamplingConfig sampling;
    OutputConfig output;

    [[nodiscard]] BernoulliPair pair() const { return {measure.p, measure.p_tilde}; }
    [[nodiscard]] PhaseSchedule schedule() const { return PhaseSchedule(measure.schedule); }
    [[nodiscard]] OscillatingMeasure mu() const { return {pair(), schedule()}; }

    /// r~ as configured, or solved from r.
    [[nodiscard]] double r_tilde() const {
        return nu.r_tilde ? *nu.r_tilde : solve_r_tilde(nu.r, pair()).r_tilde();
    }
    [[nodiscard]] OscillatingMeasure nu_measure() const { return {nu.r, r_tilde(), schedule()}; }

    [[nodiscard]] nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["measure"] = {{"p", measure.p}, {"p_tilde", measure.p_tilde}, {"schedule", measure.schedule}};
        j["nu"] = {{"r", nu.r}};
        if (nu.r_tilde) {
            j["nu"]["r_tilde"] = *nu.r_tilde;
        }
        j["partition"] = {{"q", partition.q}, {"n_min", partition.n_min}, {"n_max", partition.n_max}};
        j["grids"] = {{"q_min", grids.q_min},
                      {"q_max", grids.q_max},
                      {"q_step", grids.q_step},
                      {"alpha_count", grids.alpha_count}};
        j["sampling"] = {{"paths", sampling.paths},
                         {"depth", sampling.depth},
                         {"seed", sampling.seed},
                         {"tol", sampling.tol}};
        j["output"] = {{"format", output.format}};
        return j;
    }

    /// Digest of the resolved configuration (output directory excluded, so the
    /// same experiment written to two places carries the same hash).
    [[nodiscard]] std::string hash() const { return io::fnv1a64_hex(to_json().dump()); }

    /// Throws ConfigError naming the first violated constraint.
    void validate() const {
        const auto fail = [](const std::string& what) { throw ConfigError(what); };
        try {
            (void)pair();
            (void)schedule();
        } catch (const ValidationError& e) {
            fail(e.what());
        }
        const auto window = r_window(pair());
        if (!(nu.r > 0.0 && nu.r < 1.0) || !window.contains(nu.r)) {
            fail("nu.r = " + io::format_double(nu.r) +
                 " violates log((1-p)/(1-p~)) < r log((1-p)/p) < log((1-p)/p~)");
        }
        if (nu.r_tilde && !(*nu.r_tilde > 0.0 && *nu.r_tilde < 1.0)) {
            fail("nu.r_tilde must lie in (0, 1)");
        }
        if (partition.q.empty()) {
            fail("partition.q must not be empty");
        }
        for (double q : partition.q) {
            if (!std::isfinite(q)) {
                fail("partition.q entries must be finite");
            }
        }
        if (partition.n_min < 1 || partition.n_min >= partition.n_max || partition.n_max > kDefaultMaxDepth) {
            fail("partition requires 1 <= n_min < n_max <= " + std::to_string(kDefaultMaxDepth));
        }
        if (!(grids.q_min < grids.q_max) || !(grids.q_step > 0.0)) {
            fail("grids require q_min < q_max and q_step > 0");
        }
        if (grids.alpha_count < 3) {
            fail("grids.alpha_count must be at least 3");
        }
        if (sampling.paths < 1) {
            fail("sampling.paths must be positive");
        }
        if (sampling.depth < 1 || sampling.depth > kDefaultMaxDepth) {
            fail("sampling.depth must lie in [1, " + std::to_string(kDefaultMaxDepth) + "]");
        }
        if (!(sampling.tol > 0.0)) {
            fail("sampling.tol must be positive");
        }
        if (output.format != "csv" && output.format != "json" && output.format != "both") {
            fail("output.format must be one of csv, json, both");
        }
    }

    /// Defaults overlaid with the keys present in j.
    static ExperimentConfig from_json(const nlohmann::json& j) {
        ExperimentConfig c;
        if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
            c.output.dir = env;
        }
        try {
            if (!j.is_object()) {
                throw ConfigError("configuration must be a JSON object");
            }
            if (j.contains("measure")) {
                const auto& m = j.at("measure");
                c.measure.p = m.value("p", c.measure.p);
                c.measure.p_tilde = m.value("p_tilde", c.measure.p_tilde);
                c.measure.schedule = m.value("schedule", c.measure.schedule);
            }
            if (j.contains("nu")) {
                const auto& n = j.at("nu");
                c.nu.r = n.value("r", c.nu.r);
                if (n.contains("r_tilde") && !n.at("r_tilde").is_null()) {
                    c.nu.r_tilde = n.at("r_tilde").get<double>();
                }
                if (n.contains("schedule") && n.at("schedule").get<std::vector<std::size_t>>() != c.measure.schedule) {
                    throw ConfigError("nu.schedule must equal measure.schedule");
                }
            }
            if (j.contains("partition")) {
                const auto& p = j.at("partition");
                c.partition.q = p.value("q", c.partition.q);
                c.partition.n_min = p.value("n_min", c.partition.n_min);
                c.partition.n_max = p.value("n_max", c.partition.n_max);
            }
            if (j.contains("grids")) {
                const auto& g = j.at("grids");
                c.grids.q_min = g.value("q_min", c.grids.q_min);
                c.grids.q_max = g.value("q_max", c.grids.q_max);
                c.grids.q_step = g.value("q_step", c.grids.q_step);
                c.grids.alpha_count = g.value("alpha_count", c.grids.alpha_count);
            }
            if (j.contains("sampling")) {
                const auto& s = j.at("sampling");
                c.sampling.paths = s.value("paths", c.sampling.paths);
                c.sampling.depth = s.value("depth", c.sampling.depth);
                c.sampling.seed = s.value("seed", c.sampling.seed);
                c.sampling.tol = s.value("tol", c.sampling.tol);
            }
            if (j.contains("output")) {
                const auto& o = j.at("output");
                c.output.dir = o.value("dir", c.output.dir);
                c.output.format = o.value("format", c.output.format);
            }
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError(std::string("malformed configuration: ") + e.what());
        }
        return c;
    }

    static ExperimentConfig from_file(const std::filesystem::path& path) {
        std::ifstream f(path);
        if (!f) {
            throw ConfigError("cannot read configuration file " + path.string());
        }
        nlohmann::json j;
        try {
            f >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("configuration " + path.string() + " is not valid JSON: " + e.what());
        }
        return from_json(j);
    }

    static ExperimentConfig defaults() { return from_json(nlohmann::json::object()); }
};

} // namespace mfx
