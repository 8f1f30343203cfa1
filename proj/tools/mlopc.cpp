// mlopc: evaluate Mittag-Leffler functions by optimal-parabolic-contour
// Laplace-transform inversion, with sweep/compare/timing harnesses.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mlopc/mittag_leffler.hpp"
#include "mlopc/series_oracle.hpp"
#include "mlopc/sweep.hpp"

namespace {

using namespace mlopc;

constexpr int exit_ok = 0;
constexpr int exit_violations = 1;
constexpr int exit_usage = 2;
constexpr int exit_unsupported = 3;
constexpr int exit_no_region = 4;
constexpr int exit_oracle = 5;

struct CommonArgs {
    double alpha = 0.0;
    double beta = 1.0;
    double gamma = 1.0;
    double tol = 1e-15;
    std::string z_text, arg_text;
    double modulus = 0.0;
    int force_region_raw = -1;

    std::optional<int> force_region() const {
        return force_region_raw >= 0 ? std::optional<int>(force_region_raw) : std::nullopt;
    }
};

void add_param_flags(CLI::App* cmd, CommonArgs& a, bool need_point) {
    cmd->add_option("--alpha", a.alpha, "first parameter (> 0)")->required();
    cmd->add_option("--beta", a.beta, "second parameter");
    cmd->add_option("--gamma", a.gamma, "third parameter (> 0)");
    cmd->add_option("--tol", a.tol, "target accuracy");
    cmd->add_option("--force-region", a.force_region_raw,
                    "debug: evaluate in this chart region");
    if (need_point) {
        cmd->add_option("--z", a.z_text, "argument as a+bi");
        cmd->add_option("--modulus", a.modulus, "polar |z|");
        cmd->add_option("--arg", a.arg_text, "polar arg: radians, pi, pi/2, 3pi/4, ...");
    } else {
        cmd->add_option("--arg", a.arg_text, "arg(z): radians, pi, pi/2, 3pi/4, ...")
            ->required();
    }
}

Complex resolve_point(const CommonArgs& a) {
    if (!a.z_text.empty()) {
        auto z = parse_complex(a.z_text);
        if (!z) throw CLI::ValidationError("--z", "cannot parse complex literal");
        return *z;
    }
    if (a.arg_text.empty())
        throw CLI::ValidationError("--z", "need --z or --modulus/--arg");
    auto ang = parse_angle(a.arg_text);
    if (!ang) throw CLI::ValidationError("--arg", "cannot parse angle");
    return {a.modulus * ang->cos_of(), a.modulus * ang->sin_of()};
}

Tolerances make_tol(const CommonArgs& a) {
    Tolerances tol;
    tol.eps = a.tol;
    tol.validate();
    return tol;
}

long long now_ns() {
    return std::chrono::duration_cast<std::chrono::nanoseconds>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

struct SweepArgs {
    CommonArgs common;
    double rmin = 1e-2, rmax = 1e2;
    int points = 50;
    bool oracle = false;
    int oracle_digits = 100;
    long oracle_max_terms = 0; // 0: size automatically for the grid
    double tol_slack = 100.0;
    int repetitions = 15;
    std::string out;
    bool json = false;
};

int write_rows(const SweepArgs& s, const std::vector<SweepRecord>& rows) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!s.out.empty()) {
        file.open(s.out);
        if (!file) {
            std::cerr << "mlopc: cannot open " << s.out << " for writing\n";
            return exit_usage;
        }
        os = &file;
    }
    *os << csv_header << "\n";
    for (const SweepRecord& r : rows) *os << to_csv_row(r) << "\n";
    return exit_ok;
}

int run_sweep(const SweepArgs& s, bool timing_mode) {
    MLParams params(s.common.alpha, s.common.beta, s.common.gamma);
    Tolerances tol = make_tol(s.common);
    auto ang = parse_angle(s.common.arg_text);
    if (!ang) throw CLI::ValidationError("--arg", "cannot parse angle");
    const double c = ang->cos_of(), sn = ang->sin_of();
    std::vector<double> radii = log_grid(s.rmin, s.rmax, s.points);

    std::optional<SeriesEvaluator> oracle;
    if (s.oracle) {
        OracleConfig cfg;
        cfg.working_digits = s.oracle_digits;
        if (s.oracle_max_terms > 0)
            cfg.max_terms = s.oracle_max_terms;
        else
            cfg = suggested_config(params, s.rmax, cfg);
        oracle.emplace(params, cfg);
        oracle->prepare(s.rmax);
    }

    std::vector<SweepRecord> rows;
    std::vector<std::pair<double, double>> violations; // (r, err)
    for (double r : radii) {
        Complex z{r * c, r * sn};
        SweepRecord rec;
        rec.re_z = z.real();
        rec.im_z = z.imag();
        EvalResult ev;
        if (timing_mode) {
            std::vector<long long> samples;
            for (int k = 0; k < std::max(1, s.repetitions); ++k) {
                long long t0 = now_ns();
                ev = ml_lt(params, 1.0, z, tol, s.common.force_region());
                samples.push_back(now_ns() - t0);
            }
            std::sort(samples.begin(), samples.end());
            rec.time_ns = samples[samples.size() / 2];
        } else {
            long long t0 = now_ns();
            ev = ml_lt(params, 1.0, z, tol, s.common.force_region());
            rec.time_ns = now_ns() - t0;
        }
        rec.re_E = ev.value.real();
        rec.im_E = ev.value.imag();
        rec.n_nodes = ev.plan.n;
        rec.region_index = ev.plan.region_index;
        rec.mu = ev.plan.mu;
        rec.h = ev.plan.h;
        if (oracle) {
            Complex ref = oracle->evaluate(z);
            rec.err_mixed = mixed_error(ev.value, ref);
            if (*rec.err_mixed > s.tol_slack * tol.eps)
                violations.emplace_back(r, *rec.err_mixed);
        }
        rows.push_back(rec);
    }

    int rc = write_rows(s, rows);
    if (rc != exit_ok) return rc;
    if (!violations.empty()) {
        std::cerr << "mlopc: " << violations.size() << " of " << rows.size()
                  << " sweep points exceed tol*slack = "
                  << format_float(s.tol_slack * tol.eps) << ":\n";
        for (auto [r, e] : violations)
            std::cerr << "  r = " << format_float(r) << "  err_mixed = " << format_float(e)
                      << "\n";
        return exit_violations;
    }
    return exit_ok;
}

int run_eval(const SweepArgs& s) {
    MLParams params(s.common.alpha, s.common.beta, s.common.gamma);
    Tolerances tol = make_tol(s.common);
    Complex z = resolve_point(s.common);

    Complex value;
    EvalResult ev;
    bool have_plan = false;
    if (z == Complex{0.0, 0.0}) {
        value = {rgamma_real(params.beta), 0.0};
    } else {
        ev = ml_lt(params, 1.0, z, tol, s.common.force_region());
        value = ev.value;
        have_plan = true;
    }

    if (s.json) {
        nlohmann::json j;
        j["alpha"] = params.alpha;
        j["beta"] = params.beta;
        j["gamma"] = params.gamma;
        j["z"] = {{"re", z.real()}, {"im", z.imag()}};
        j["value"] = {{"re", value.real()}, {"im", value.imag()}};
        j["tol"] = tol.eps;
        if (have_plan) {
            j["n_nodes"] = ev.plan.n;
            j["region_index"] = ev.plan.region_index;
            j["mu"] = ev.plan.mu;
            j["h"] = ev.plan.h;
            j["n_integrand_evals"] = ev.n_integrand_evals;
        }
        std::cout << j.dump() << "\n";
    } else {
        std::cout << format_complex(value) << "\n";
    }
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mittag-Leffler function evaluation on optimal parabolic contours"};
    app.require_subcommand(1);

    SweepArgs eval_args, sweep_args, compare_args, time_args;

    CLI::App* eval = app.add_subcommand("eval", "evaluate E^gamma_{alpha,beta}(z)");
    add_param_flags(eval, eval_args.common, true);
    eval->add_flag("--json", eval_args.json, "emit JSON instead of text");

    auto add_grid_flags = [](CLI::App* cmd, SweepArgs& s) {
        cmd->add_option("--rmin", s.rmin, "smallest |z|");
        cmd->add_option("--rmax", s.rmax, "largest |z|");
        cmd->add_option("--points", s.points, "grid size");
        cmd->add_option("--out", s.out, "CSV output path (default stdout)");
        cmd->add_option("--tol-slack", s.tol_slack,
                        "allowed err_mixed as a multiple of --tol");
        cmd->add_option("--oracle-digits", s.oracle_digits, "series oracle precision");
        cmd->add_option("--oracle-max-terms", s.oracle_max_terms,
                        "series term cap (0: automatic)");
    };

    CLI::App* sweep = app.add_subcommand("sweep", "radial sweep at fixed arg(z), CSV out");
    add_param_flags(sweep, sweep_args.common, false);
    add_grid_flags(sweep, sweep_args);
    sweep->add_flag("--oracle", sweep_args.oracle, "add err_mixed vs the series oracle");

    CLI::App* compare =
        app.add_subcommand("compare", "radial sweep with oracle comparison, CSV out");
    add_param_flags(compare, compare_args.common, false);
    add_grid_flags(compare, compare_args);
    compare_args.oracle = true;

    CLI::App* timecmd =
        app.add_subcommand("time", "median per-point evaluation time over repetitions");
    add_param_flags(timecmd, time_args.common, false);
    add_grid_flags(timecmd, time_args);
    timecmd->add_option("--repetitions", time_args.repetitions, "samples per point");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return exit_usage;
    }

    try {
        if (eval->parsed()) return run_eval(eval_args);
        if (sweep->parsed()) return run_sweep(sweep_args, false);
        if (compare->parsed()) return run_sweep(compare_args, false);
        if (timecmd->parsed()) return run_sweep(time_args, true);
    } catch (const unsupported_parameters& e) {
        std::cerr << "mlopc: unsupported parameters: " << e.what() << "\n";
        return exit_unsupported;
    } catch (const no_admissible_region& e) {
        std::cerr << "mlopc: " << e.what() << "\n";
        return exit_no_region;
    } catch (const oracle_non_convergence& e) {
        std::cerr << "mlopc: " << e.what() << "\n";
        return exit_oracle;
    } catch (const CLI::Error& e) {
        std::cerr << "mlopc: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "mlopc: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
