#ifndef SFGLAB_H
#define SFGLAB_H

/*
 * C interface to the broadband two-photon spectral simulator.
 *
 * Every fallible call returns an error code; SFG_OK means success. On
 * failure, sfg_last_error() returns a thread-local, human-readable message
 * describing the most recent failure on the calling thread.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define SFG_OK 0
#define SFG_ERROR_ARGUMENT 1     /* null pointer or out-of-range handle use */
#define SFG_ERROR_CONFIG 2       /* invalid configuration or input file */
#define SFG_ERROR_VERIFICATION 3 /* a built-in self-check failed */
#define SFG_ERROR_RUNTIME 4      /* any other runtime failure */

/* Version string of the library, static storage. */
const char* sfg_version(void);

/* Message for the most recent failure on this thread, static storage. */
const char* sfg_last_error(void);

/* Opaque handles. */
typedef struct sfg_grid sfg_grid;
typedef struct sfg_mask sfg_mask;

/*
 * Uniform frequency grid of n_modes signal modes centred on half the pump
 * frequency, covering +/- half_span_rad_per_fs. n_modes must be even so the
 * modes pair up symmetrically around the centre.
 */
int sfg_grid_create(double pump_frequency_rad_per_fs, double half_span_rad_per_fs,
                    int n_modes, sfg_grid** out);
void sfg_grid_destroy(sfg_grid* grid);
int sfg_grid_mode_count(const sfg_grid* grid, int* out);
int sfg_grid_frequency(const sfg_grid* grid, int index, double* out);

/* Spectral phase masks defined on a grid. */
int sfg_mask_zero(const sfg_grid* grid, sfg_mask** out);
/* Opposite group delays +/- tau_fs for the modes above/below the centre. */
int sfg_mask_split_delay(const sfg_grid* grid, double tau_fs, sfg_mask** out);
/* Phase alpha_rad * sin(beta_fs * (omega - centre) + theta_rad). */
int sfg_mask_sinusoidal(const sfg_grid* grid, double alpha_rad, double beta_fs,
                        double theta_rad, sfg_mask** out);
/* Load per-mode phases from a two-column CSV written by sfg_mask_write_csv. */
int sfg_mask_from_csv(const sfg_grid* grid, const char* path, sfg_mask** out);
int sfg_mask_phase(const sfg_mask* mask, int index, double* out);
int sfg_mask_write_csv(const sfg_mask* mask, const char* path);
void sfg_mask_destroy(sfg_mask* mask);

/*
 * Closed-form ratio of the phase-sensitive to the phase-insensitive
 * two-photon intensity at the line centre, for a flat source of the given
 * bandwidth: bandwidth / (2 (pump_fwhm + detector_fwhm)) * (n + 1) / n,
 * where n is the mean photon number per mode. All widths in rad/fs.
 */
int sfg_qc_ratio(double bandwidth_rad_per_fs, double pump_fwhm_rad_per_fs,
                 double detector_fwhm_rad_per_fs, double mean_photons, double* out);

/*
 * Run a full experiment described by a JSON configuration. Writes
 * spectrum.csv or scan.csv plus summary.json into out_dir (created if
 * missing). seed_override < 0 and threads_override < 1 keep the values
 * from the configuration.
 */
int sfg_run_experiment_json(const char* config_json, const char* out_dir,
                            long long seed_override, int threads_override);
int sfg_run_experiment_file(const char* config_path, const char* out_dir,
                            long long seed_override, int threads_override);

/*
 * Run the built-in self-checks. Returns SFG_OK when all pass and
 * SFG_ERROR_VERIFICATION when any fails. When report is non-null and
 * capacity > 0, a line-per-check report is copied into it, truncated if
 * necessary and always NUL-terminated.
 */
int sfg_verify(char* report, size_t capacity);

#ifdef __cplusplus
}
#endif

#endif /* SFGLAB_H */
