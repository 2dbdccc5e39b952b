#pragma once

// Command-line front end:
//
//   mfx partition|spectrum|sample|verify [--config PATH] [--out DIR] [--seed INT] [--format csv|json|both]
//
// Exit codes: 0 success, 1 a verification check failed, 2 configuration or
// usage error. Settings resolve as flag, then config file, then default; the
// default output directory comes from MFX_OUT_DIR when set.

#include "mfx/artifacts.hpp"
#include "mfx/config.hpp"
#include "mfx/io.hpp"
#include "mfx/verify.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace mfx::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitConfig = 2;

struct Overrides {
    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> format;
};

[[nodiscard]] inline ExperimentConfig resolve_config(const Overrides& o) {
    ExperimentConfig cfg = o.config_path ? ExperimentConfig::from_file(*o.config_path) : ExperimentConfig::defaults();
    if (o.out_dir) {
        cfg.output.dir = *o.out_dir;
    }
    if (o.seed) {
        cfg.sampling.seed = *o.seed;
    }
    if (o.format) {
        cfg.output.format = *o.format;
    }
    cfg.validate();
    return cfg;
}

inline void write_artifacts(const ExperimentConfig& cfg, const Artifacts& files, std::ostream& out) {
    const std::filesystem::path dir(cfg.output.dir);
    for (const auto& [name, content] : files) {
        io::write_file(dir / name, content);
        out << "wrote " << (dir / name).string() << '\n';
    }
}

inline int cmd_partition(const ExperimentConfig& cfg, std::ostream& out) {
    write_artifacts(cfg, partition_artifacts(cfg), out);
    return kExitOk;
}

inline int cmd_spectrum(const ExperimentConfig& cfg, std::ostream& out) {
    const auto table = spectrum_table(cfg);
    write_artifacts(cfg, spectrum_artifacts(cfg, table), out);
    out << table.rows.size() << " rows, " << table.dropped.size() << " dropped\n";
    return kExitOk;
}

inline int cmd_sample(const ExperimentConfig& cfg, std::ostream& out) {
    const auto run = run_sampling(cfg);
    write_artifacts(cfg, sample_artifacts(cfg, run), out);
    const auto in_both = std::count(run.verdicts.begin(), run.verdicts.end(), LevelSetVerdict::InBoth);
    out << run.traces.size() << " paths, " << in_both << " localized at alpha = " << io::format_double(run.alpha)
        << '\n';
    return kExitOk;
}

inline int cmd_verify(const ExperimentConfig& cfg, std::ostream& out) {
    RuntimeLog times;
    const auto report = run_verify(cfg, &times);
    io::write_file(std::filesystem::path(cfg.output.dir) / "verify.json", verify_json(cfg, report));
    for (std::size_t i = 0; i < report.checks.size(); ++i) {
        const auto& c = report.checks[i];
        char line[160];
        std::snprintf(line, sizeof line, "[%s] %2d %-26s %8.3f s", c.passed ? "PASS" : "FAIL", c.id, c.name.c_str(),
                      times.seconds[i].second);
        out << line << '\n';
    }
    out << (report.all_passed() ? "all checks passed" : "some checks FAILED") << '\n';
    return report.all_passed() ? kExitOk : kExitCheckFailed;
}

/// Parses argv and runs one subcommand. Never throws.
inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multifractal spectra of oscillating Bernoulli measures", "mfx"};
    app.require_subcommand(1, 1);
    app.set_version_flag("--version", io::kToolVersion);

    Overrides o;
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    std::string format;
    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "experiment configuration (JSON)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--seed", seed, "master seed for path sampling");
        sub->add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json", "both"}));
    };
    CLI::App* partition = app.add_subcommand("partition", "coarse partition sums and envelopes");
    CLI::App* spectrum = app.add_subcommand("spectrum", "Hausdorff and packing spectrum table");
    CLI::App* sample = app.add_subcommand("sample", "Monte-Carlo exponent traces from the auxiliary measure");
    CLI::App* verify = app.add_subcommand("verify", "run every verification check");
    for (CLI::App* sub : {partition, spectrum, sample, verify}) {
        add_common(sub);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitConfig;
    }

    CLI::App* chosen = app.get_subcommands().front();
    if (chosen->count("--config") > 0) {
        o.config_path = config_path;
    }
    if (chosen->count("--out") > 0) {
        o.out_dir = out_dir;
    }
    if (chosen->count("--seed") > 0) {
        o.seed = seed;
    }
    if (chosen->count("--format") > 0) {
        o.format = format;
    }

    ExperimentConfig cfg;
    try {
        cfg = resolve_config(o);
    } catch (const ConfigError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    }

    try {
        if (chosen == partition) {
            return cmd_partition(cfg, out);
        }
        if (chosen == spectrum) {
            return cmd_spectrum(cfg, out);
        }
        if (chosen == sample) {
            return cmd_sample(cfg, out);
        }
        return cmd_verify(cfg, out);
    } catch (const ValidationError& e) {
        err << "configuration error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitCheckFailed;
    }
}

} // namespace mfx::cli
