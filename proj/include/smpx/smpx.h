#ifndef SMPX_H
#define SMPX_H

/* C interface to the smpx library. All functions return an smpx_status;
 * on failure smpx_last_error() describes the problem (per thread). Strings
 * returned through char** are owned by the caller and released with
 * smpx_string_free. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SMPX_BUILDING_LIBRARY)
#    define SMPX_API __declspec(dllexport)
#  else
#    define SMPX_API __declspec(dllimport)
#  endif
#else
#  define SMPX_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smpx_status {
  SMPX_OK = 0,
  SMPX_ERR_CONFIG = 2,
  SMPX_ERR_NUMERICAL = 3,
  SMPX_ERR_CHECK_FAILED = 4,
  SMPX_ERR_IO = 5,
  SMPX_ERR_INPUT = 6,
  SMPX_ERR_DOMAIN = 7,
  SMPX_ERR_INTERNAL = 70
} smpx_status;

typedef struct smpx_instance smpx_instance;
typedef struct smpx_config smpx_config;
typedef struct smpx_result smpx_result;

SMPX_API const char* smpx_version(void);
SMPX_API const char* smpx_last_error(void);
SMPX_API void smpx_string_free(char* s);

/* Instances. params_json may be NULL or "" for defaults. */
SMPX_API smpx_status smpx_instance_generate(const char* kind, const char* params_json,
                                            uint64_t seed, smpx_instance** out);
SMPX_API smpx_status smpx_instance_load(const char* path, smpx_instance** out);
SMPX_API smpx_status smpx_instance_save(const smpx_instance* inst, const char* path);
SMPX_API smpx_status smpx_instance_to_json(const smpx_instance* inst, char** out);
SMPX_API void smpx_instance_free(smpx_instance* inst);

/* Experiment configuration (JSON text or file). smpx_config_set assigns a
 * JSON value to a top-level or dotted key, e.g. ("t", "1000"). */
SMPX_API smpx_status smpx_config_parse(const char* json_text, smpx_config** out);
SMPX_API smpx_status smpx_config_load(const char* path, smpx_config** out);
SMPX_API smpx_status smpx_config_set(smpx_config* cfg, const char* key, const char* json_value);
SMPX_API smpx_status smpx_config_to_json(const smpx_config* cfg, char** out);
SMPX_API void smpx_config_free(smpx_config* cfg);

/* Runs every seed of the config; writes CSV/JSON if the config names paths. */
SMPX_API smpx_status smpx_run(const smpx_config* cfg, smpx_result** out);
SMPX_API smpx_status smpx_result_write(const smpx_result* res, const char* csv_path,
                                       const char* json_path);
SMPX_API smpx_status smpx_result_csv(const smpx_result* res, char** out);
SMPX_API smpx_status smpx_result_json(const smpx_result* res, char** out);
SMPX_API size_t smpx_result_num_checkpoints(const smpx_result* res);
/* Summary row i: checkpoint t, mean/median Err_N over seeds, K0*, K1*. */
SMPX_API smpx_status smpx_result_row(const smpx_result* res, size_t i, size_t* t, double* mean,
                                     double* median, double* k0, double* k1);
SMPX_API double smpx_result_gamma(const smpx_result* res);
SMPX_API void smpx_result_free(smpx_result* res);

/* Log-log slope of mean Err_N over checkpoints in [t_lo, t_hi] with a
 * 200-resample bootstrap interval. *degenerate is set when a mean is not
 * positive. */
SMPX_API smpx_status smpx_result_slope(const smpx_result* res, size_t t_lo, size_t t_hi,
                                       double* slope, double* ci_lo, double* ci_hi,
                                       int* degenerate);
/* Same, from a results CSV column ("err_nash", "lmax_1", "pos:lmax_1", ...). */
SMPX_API smpx_status smpx_csv_slope(const char* path, const char* column, size_t t_lo,
                                    size_t t_hi, double* slope, double* ci_lo,
                                    double* ci_hi, int* degenerate);

/* Checks mean Err_N <= K0* at the final checkpoint, and the slope range when
 * slope_lo < slope_hi. Returns SMPX_ERR_CHECK_FAILED on violation. */
SMPX_API smpx_status smpx_result_verify(const smpx_result* res, double slope_lo,
                                        double slope_hi, size_t t_lo, size_t t_hi);

SMPX_API smpx_status smpx_constant_stepsize(double alpha, double omega, double lip_L,
                                            double noise_M, size_t t, double* gamma);
SMPX_API smpx_status smpx_theoretical_bounds(double alpha, double omega, double lip_L,
                                             double noise_M, double bias_mu, size_t t,
                                             double* k0, double* k1);

#ifdef __cplusplus
}
#endif

#endif
