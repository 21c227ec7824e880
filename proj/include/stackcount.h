#ifndef STACKCOUNT_H
#define STACKCOUNT_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SC_API __declspec(dllexport)
#else
#define SC_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct sc_fan sc_fan;

typedef enum sc_status {
  SC_OK = 0,
  SC_ERR_PARSE,
  SC_ERR_NOT_SIMPLICIAL,
  SC_ERR_NOT_COMPLETE,
  SC_ERR_ZERO_RAY,
  SC_ERR_DUPLICATE_RAY,
  SC_ERR_BAD_WEIGHTS,
  SC_ERR_TORSION_PICARD,
  SC_ERR_DEGENERATE_POINT,
  SC_ERR_ZERO_K,
  SC_ERR_BUDGET,
  SC_ERR_TOO_LARGE,
  SC_ERR_INVALID_ARGUMENT,
  SC_ERR_INTERNAL
} sc_status;

SC_API const char* sc_version(void);
SC_API const char* sc_status_name(sc_status s);
/* message of the last failing call on this thread ("Kind: detail") */
SC_API const char* sc_last_error(void);
/* short error kind of the last failing call, e.g. "NotComplete" */
SC_API const char* sc_last_error_kind(void);
SC_API void sc_string_free(char* s);

/* {"n_rank":2,"n_torsion":[],"rays":[[1,0],...],"max_cones":[[0,1],...]} or {"weights":[1,2]} */
SC_API sc_status sc_fan_from_json(const char* json, sc_fan** out);
SC_API sc_status sc_fan_weighted(const int64_t* weights, size_t n, sc_fan** out);
SC_API void sc_fan_free(sc_fan* fan);

/* Reports are JSON; config is a JSON object (may be NULL or "{}"):
   domain {lower, upper, u}, u, B, prime_bound, samples, seed, threads,
   budget, timing. */
SC_API sc_status sc_analyze(const sc_fan* fan, char** json_out);
SC_API sc_status sc_density(const sc_fan* fan, const char* config, char** json_out);
SC_API sc_status sc_tamagawa(const sc_fan* fan, const char* config, char** json_out);
SC_API sc_status sc_count(const sc_fan* fan, const char* config, char** csv_out, char** json_out);
SC_API sc_status sc_verify(const sc_fan* fan, const char* config, char** csv_out, char** json_out);

SC_API sc_status sc_gcd_w(const int64_t* weights, const int64_t* x, size_t n, int64_t* out);
/* log extended height (basis classes, then sectors); out has rho_orb entries */
SC_API sc_status sc_extended_height(const sc_fan* fan, const int64_t* y, size_t ny, const int64_t* k,
                                    size_t nk, double* out, size_t nout);
SC_API sc_status sc_rho_orb(const sc_fan* fan, size_t* out);

#ifdef __cplusplus
}
#endif

#endif
