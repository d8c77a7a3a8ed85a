#include <cstdlib>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "rsnl/commands.hpp"
#include "rsnl/nonlocal.hpp"

namespace rsnl {

namespace {

int threads_from_env() {
    const char* env = std::getenv("RSNL_THREADS");
    if (!env) return 1;
    const int n = std::atoi(env);
    return n >= 1 ? n : 1;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Spectral solver for the time-nonlocal fractional Rayleigh-Stokes problem"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int threads = threads_from_env();

    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--threads", threads, "worker threads (env RSNL_THREADS as fallback)");

    CLI::App* eval_kernel = app.add_subcommand("eval-kernel", "tabulate the relaxation kernel");
    CLI::App* verify_bounds = app.add_subcommand("verify-bounds", "check the kernel inequalities");
    CLI::App* solve = app.add_subcommand("solve", "solve the nonlocal problem");
    CLI::App* sweep_beta = app.add_subcommand("sweep-beta", "conditioning tables across beta");
    CLI::App* find_k0 = app.add_subcommand("find-k0", "resonant-set membership scan");
    CLI::App* oracle_compare =
        app.add_subcommand("oracle-compare", "kernel quadrature vs time-stepping oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        if (threads < 1) threads = 1;
        if (eval_kernel->parsed()) return cmd_eval_kernel(cfg, out_dir, threads);
        if (verify_bounds->parsed()) return cmd_verify_bounds(cfg, out_dir, threads);
        if (solve->parsed()) return cmd_solve(cfg, out_dir, threads);
        if (sweep_beta->parsed()) return cmd_sweep_beta(cfg, out_dir, threads);
        if (find_k0->parsed()) return cmd_find_k0(cfg, out_dir, threads);
        if (oracle_compare->parsed()) return cmd_oracle_compare(cfg, out_dir, threads);
        return kExitConfig;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const OrthogonalityViolation& e) {
        std::cerr << "no solution: " << e.what() << '\n';
        return kExitOrthogonality;
    } catch (const QuadratureError& e) {
        std::cerr << "quadrature failure: " << e.what() << '\n';
        return kExitQuadrature;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

}  // namespace rsnl
