/* C interface to the spdcoam simulator. All handles are opaque; every call
 * returns a status code and the last failure message is kept per thread. */
#ifndef SPDCOAM_H
#define SPDCOAM_H

#include <stddef.h>

#if defined(SPDCOAM_BUILDING_LIBRARY)
#define SPDC_API __attribute__((visibility("default")))
#else
#define SPDC_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spdc_status {
  SPDC_OK = 0,
  SPDC_ERR_INVALID_ARGUMENT = 1,
  SPDC_ERR_CONFIG = 2,
  SPDC_ERR_NUMERIC = 3,
  SPDC_ERR_IO = 4,
  SPDC_ERR_INTERNAL = 5
} spdc_status;

typedef struct spdc_config spdc_config;
typedef struct spdc_grid spdc_grid;
typedef struct spdc_spectrum spdc_spectrum;

SPDC_API const char* spdc_version(void);
/* Message for the most recent failing call on this thread ("" if none). */
SPDC_API const char* spdc_last_error(void);
/* Frees strings returned through char** out-parameters. */
SPDC_API void spdc_string_free(char* s);

SPDC_API spdc_status spdc_config_parse_text(const char* text, spdc_config** out);
SPDC_API spdc_status spdc_config_parse_file(const char* path, spdc_config** out);
/* Canonical key = value text and its sha256 digest. */
SPDC_API spdc_status spdc_config_canonical(const spdc_config* cfg, char** text, char** digest);
SPDC_API void spdc_config_free(spdc_config* cfg);

/* Runs the pipeline; output_dir may be NULL to use the config's output.dir. */
SPDC_API spdc_status spdc_run_scenario(const spdc_config* cfg, const char* output_dir, char** manifest_json);
SPDC_API spdc_status spdc_run_sweep_file(const char* spec_path, const char* output_dir, char** manifest_json);
SPDC_API spdc_status spdc_validate_sweep_file(const char* spec_path);

SPDC_API spdc_status spdc_grid_load(const char* path, spdc_grid** out);
SPDC_API spdc_status spdc_grid_save(const spdc_grid* grid, const char* path);
SPDC_API spdc_status spdc_grid_create(int nx, int ny, double dx, double dy, double cx, double cy,
                                      const double* interleaved_re_im, spdc_grid** out);
SPDC_API void spdc_grid_free(spdc_grid* grid);
SPDC_API spdc_status spdc_grid_dims(const spdc_grid* grid, int* nx, int* ny, double* dx, double* dy, double* cx,
                                    double* cy);
/* Copies nx*ny (re, im) pairs, y fastest, into out (capacity 2*nx*ny doubles). */
SPDC_API spdc_status spdc_grid_values(const spdc_grid* grid, double* out, size_t capacity);
SPDC_API spdc_status spdc_grid_apply_mask(const spdc_grid* grid, int n, spdc_grid** out);
SPDC_API spdc_status spdc_grid_rotate(const spdc_grid* grid, double dphi, spdc_grid** out);
SPDC_API spdc_status spdc_grid_asymmetry(const spdc_grid* grid, double* metric);
SPDC_API spdc_status spdc_grid_gaussian_overlap(const spdc_grid* grid, double* overlap);

SPDC_API spdc_status spdc_grid_spectrum(const spdc_grid* grid, int max_m, spdc_spectrum** out);
/* m must lie in [-max_m, max_m]. */
SPDC_API spdc_status spdc_spectrum_power_fraction(const spdc_spectrum* s, int m, double* fraction);
SPDC_API spdc_status spdc_spectrum_max_m(const spdc_spectrum* s, int* max_m);
/* Writes <prefix>_harmonics.csv and <prefix>_summary.csv. */
SPDC_API spdc_status spdc_spectrum_write_csv(const spdc_spectrum* s, const char* prefix);
SPDC_API void spdc_spectrum_free(spdc_spectrum* s);

/* Classification report (JSON, report_v1) for a coincidence-profile grid. */
SPDC_API spdc_status spdc_classify_grid(const spdc_grid* grid, int pump_l, double dominance, double symmetry,
                                        int max_m, char** report_json);

#ifdef __cplusplus
}
#endif

#endif
