// Command-line front end. Talks to the library exclusively through the C
// interface in sfglab.h.
//
// Exit codes: 0 success, 2 configuration or usage error, 3 self-check
// failure, 1 any other runtime failure.

#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "sfglab.h"

namespace {

int exit_code_for(int rc) {
    switch (rc) {
    case SFG_OK:
        return 0;
    case SFG_ERROR_CONFIG:
        return 2;
    case SFG_ERROR_VERIFICATION:
        return 3;
    default:
        return 1;
    }
}

int do_verify() {
    std::vector<char> report(1 << 16, '\0');
    const int rc = sfg_verify(report.data(), report.size());
    std::fputs(report.data(), stdout);
    if (rc != SFG_OK) {
        std::fprintf(stderr, "error: %s\n", sfg_last_error());
        return exit_code_for(rc);
    }
    std::puts("all self-checks passed");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral simulator of broadband two-photon signals"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    long long seed = -1;
    int threads = 0;
    bool verify_first = false;

    CLI::App* run = app.add_subcommand("run", "Run an experiment from a JSON config");
    run->add_option("config", config_path, "JSON configuration file")->required();
    run->add_option("--out", out_dir, "Output directory (default: out)");
    run->add_option("--seed", seed, "Override run.seed from the config");
    run->add_option("--threads", threads, "Override run.threads from the config");
    run->add_flag("--verify", verify_first, "Run the built-in self-checks first");

    CLI::App* verify = app.add_subcommand("verify", "Run the built-in self-checks");
    CLI::App* version = app.add_subcommand("version", "Print the library version");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    if (version->parsed()) {
        std::printf("%s\n", sfg_version());
        return 0;
    }
    if (verify->parsed()) return do_verify();

    if (verify_first) {
        const int code = do_verify();
        if (code != 0) return code;
    }
    const int rc = sfg_run_experiment_file(config_path.c_str(), out_dir.c_str(),
                                           seed, threads);
    if (rc != SFG_OK) {
        std::fprintf(stderr, "error: %s\n", sfg_last_error());
        return exit_code_for(rc);
    }
    std::printf("wrote results to %s\n", out_dir.c_str());
    return 0;
}
