#include "sfglab.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <new>
#include <stdexcept>
#include <string>

#include "sfglab/experiment.hpp"
#include "sfglab/oracles.hpp"
#include "sfglab/shaper.hpp"

struct sfg_grid {
    sfglab::SpectralGrid grid;
};

struct sfg_mask {
    sfglab::PhaseMask mask;
};

namespace {

thread_local std::string g_last_error;

int set_error(int code, const char* what) {
    g_last_error = what ? what : "unknown error";
    return code;
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return SFG_OK;
    } catch (const std::invalid_argument& e) {
        return set_error(SFG_ERROR_CONFIG, e.what());
    } catch (const std::bad_alloc&) {
        return set_error(SFG_ERROR_RUNTIME, "out of memory");
    } catch (const std::exception& e) {
        return set_error(SFG_ERROR_RUNTIME, e.what());
    } catch (...) {
        return set_error(SFG_ERROR_RUNTIME, "unknown error");
    }
}

void apply_overrides(sfglab::ExperimentConfig& cfg, long long seed_override,
                     int threads_override) {
    if (seed_override >= 0) cfg.run.seed = static_cast<std::uint64_t>(seed_override);
    if (threads_override >= 1) {
        if (threads_override > 256)
            throw std::invalid_argument("config: run.threads: must lie in [1, 256]");
        cfg.run.threads = threads_override;
    }
}

} // namespace

extern "C" {

const char* sfg_version(void) { return sfglab::library_version(); }

const char* sfg_last_error(void) { return g_last_error.c_str(); }

int sfg_grid_create(double pump_frequency_rad_per_fs, double half_span_rad_per_fs,
                    int n_modes, sfg_grid** out) {
    if (!out) return set_error(SFG_ERROR_ARGUMENT, "out pointer is null");
    *out = nullptr;
    return guarded([&] {
        *out = new sfg_grid{sfglab::SpectralGrid(pump_frequency_rad_per_fs,
                                                 half_span_rad_per_fs, n_modes)};
    });
}

void sfg_grid_destroy(sfg_grid* grid) { delete grid; }

int sfg_grid_mode_count(const sfg_grid* grid, int* out) {
    if (!grid || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    *out = grid->grid.n_modes();
    return SFG_OK;
}

int sfg_grid_frequency(const sfg_grid* grid, int index, double* out) {
    if (!grid || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    if (index < 0 || index >= grid->grid.n_modes())
        return set_error(SFG_ERROR_ARGUMENT, "mode index out of range");
    *out = grid->grid.frequency(index);
    return SFG_OK;
}

int sfg_mask_zero(const sfg_grid* grid, sfg_mask** out) {
    if (!grid || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] { *out = new sfg_mask{sfglab::zero_mask(grid->grid)}; });
}

int sfg_mask_split_delay(const sfg_grid* grid, double tau_fs, sfg_mask** out) {
    if (!grid || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        *out = new sfg_mask{sfglab::split_delay_mask(
            grid->grid, grid->grid.pump_frequency(), tau_fs)};
    });
}

int sfg_mask_sinusoidal(const sfg_grid* grid, double alpha_rad, double beta_fs,
                        double theta_rad, sfg_mask** out) {
    if (!grid || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] {
        *out = new sfg_mask{sfglab::sinusoidal_mask(
            grid->grid, grid->grid.pump_frequency(), alpha_rad, beta_fs, theta_rad)};
    });
}

int sfg_mask_from_csv(const sfg_grid* grid, const char* path, sfg_mask** out) {
    if (!grid || !path || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    *out = nullptr;
    return guarded([&] { *out = new sfg_mask{sfglab::read_mask_csv(grid->grid, path)}; });
}

int sfg_mask_phase(const sfg_mask* mask, int index, double* out) {
    if (!mask || !out) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    if (index < 0 || std::size_t(index) >= mask->mask.phase.size())
        return set_error(SFG_ERROR_ARGUMENT, "mode index out of range");
    *out = mask->mask.phase[std::size_t(index)];
    return SFG_OK;
}

int sfg_mask_write_csv(const sfg_mask* mask, const char* path) {
    if (!mask || !path) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    return guarded([&] { sfglab::write_mask_csv(mask->mask, path); });
}

void sfg_mask_destroy(sfg_mask* mask) { delete mask; }

int sfg_qc_ratio(double bandwidth_rad_per_fs, double pump_fwhm_rad_per_fs,
                 double detector_fwhm_rad_per_fs, double mean_photons, double* out) {
    if (!out) return set_error(SFG_ERROR_ARGUMENT, "out pointer is null");
    return guarded([&] {
        *out = sfglab::qc_ratio_formula(bandwidth_rad_per_fs, pump_fwhm_rad_per_fs,
                                        detector_fwhm_rad_per_fs, mean_photons);
    });
}

int sfg_run_experiment_json(const char* config_json, const char* out_dir,
                            long long seed_override, int threads_override) {
    if (!config_json || !out_dir) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    return guarded([&] {
        sfglab::ExperimentConfig cfg = sfglab::parse_config(config_json);
        apply_overrides(cfg, seed_override, threads_override);
        sfglab::run_experiment(cfg, out_dir);
    });
}

int sfg_run_experiment_file(const char* config_path, const char* out_dir,
                            long long seed_override, int threads_override) {
    if (!config_path || !out_dir) return set_error(SFG_ERROR_ARGUMENT, "null pointer");
    return guarded([&] {
        sfglab::ExperimentConfig cfg = sfglab::load_config_file(config_path);
        apply_overrides(cfg, seed_override, threads_override);
        sfglab::run_experiment(cfg, out_dir);
    });
}

int sfg_verify(char* report, size_t capacity) {
    std::string text;
    bool all_pass = true;
    const int rc = guarded([&] {
        for (const sfglab::CheckResult& c : sfglab::verify_all()) {
            all_pass = all_pass && c.pass;
            text += c.pass ? "PASS " : "FAIL ";
            text += c.name;
            if (!c.detail.empty()) {
                text += ": ";
                text += c.detail;
            }
            text += '\n';
        }
    });
    if (report && capacity > 0) {
        const std::size_t n = std::min(capacity - 1, text.size());
        std::memcpy(report, text.data(), n);
        report[n] = '\0';
    }
    if (rc != SFG_OK) return rc;
    if (!all_pass) return set_error(SFG_ERROR_VERIFICATION, "one or more self-checks failed");
    return SFG_OK;
}

} // extern "C"
