#ifndef LSA_LSA_H
#define LSA_LSA_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(LSA_BUILDING)
#    define LSA_API __declspec(dllexport)
#  else
#    define LSA_API __declspec(dllimport)
#  endif
#else
#  define LSA_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct lsa_dictionary lsa_dictionary;
typedef struct lsa_image lsa_image;

typedef enum lsa_status {
  LSA_OK = 0,
  LSA_INVALID_ARGUMENT = 1,
  LSA_ZERO_COLUMN = 2,
  LSA_NOT_NORMALIZED = 3,
  LSA_NON_FINITE_ENTRY = 4,
  LSA_SINGLE_ATOM = 5,
  LSA_SPARSITY_TOO_LARGE = 6,
  LSA_OVERLAPPING_SUPPORTS = 7,
  LSA_INVALID_SUPPORT = 8,
  LSA_BUDGET_EXCEEDED = 9,
  LSA_EPS_OUT_OF_RANGE = 10,
  LSA_DIMENSION_TOO_SMALL = 11,
  LSA_ODD_SPLIT = 12,
  LSA_ODD_DIMENSION = 13,
  LSA_KERDOCK_SET_INVALID = 14,
  LSA_S_OUT_OF_RANGE = 15,
  LSA_PARAMETER_OUT_OF_RANGE = 16,
  LSA_ZERO_TARGET = 17,
  LSA_WITNESS_NOT_FOUND = 18,
  LSA_DEPTH_TOO_LARGE = 19,
  LSA_PARSE_ERROR = 20,
  LSA_IO_ERROR = 21,
  LSA_INTERNAL_ERROR = 99
} lsa_status;

LSA_API const char* lsa_version(void);
LSA_API const char* lsa_status_name(lsa_status status);
/* Message of the last failed call on this thread; "" after a success. */
LSA_API const char* lsa_last_error(void);
/* Releases any char* handed out by this library. */
LSA_API void lsa_string_free(char* s);

/* Dictionaries. Entries are column-major; `imag` may be NULL for a real
   matrix. */
LSA_API lsa_status lsa_dictionary_create(int m, int n, const double* real, const double* imag,
                                         int normalize, double tol, lsa_dictionary** out);
LSA_API lsa_status lsa_dictionary_from_json(const char* json, int normalize,
                                            lsa_dictionary** out);
LSA_API lsa_status lsa_dictionary_load(const char* path, int normalize, lsa_dictionary** out);
LSA_API lsa_status lsa_dictionary_to_json(const lsa_dictionary* d, char** out);
LSA_API lsa_status lsa_dictionary_save(const lsa_dictionary* d, const char* path);
LSA_API int lsa_dictionary_rows(const lsa_dictionary* d);
LSA_API int lsa_dictionary_atoms(const lsa_dictionary* d);
LSA_API void lsa_dictionary_free(lsa_dictionary* d);

/* Invariants. budget caps the subsets examined (0 = unlimited). */
LSA_API lsa_status lsa_coherence(const lsa_dictionary* d, double* out);
LSA_API lsa_status lsa_spark(const lsa_dictionary* d, double rank_tol, uint64_t budget,
                             int* value, int* infinite);
LSA_API lsa_status lsa_generalized_coherence(const lsa_dictionary* d, int k, double rank_tol,
                                             uint64_t budget, double* out);
LSA_API lsa_status lsa_analyze(const lsa_dictionary* d, int max_k, double rank_tol,
                               uint64_t budget, char** report_json);

/* Constructions: name is one of identity-bad-b, tight-example, spikes-sines,
   picket-solutions, kerdock, kerdock-solutions, mu-k-tight, equiangular-2d;
   params_json is an object of the generator's integer/real parameters. */
LSA_API lsa_status lsa_construct(const char* name, const char* params_json,
                                 lsa_dictionary** dict_out, char** bundle_json);

/* Request keys: problem ("sparse" | "approx"), k, eps, mode ("exact-size" |
   "minimal-supports"), restrict (array of R), target (vector JSON), budget,
   rank_tol, eq_tol, abs_tol. */
LSA_API lsa_status lsa_solve(const lsa_dictionary* d, const char* request_json,
                             char** result_json);
LSA_API lsa_status lsa_witness(const lsa_dictionary* d, int k, uint64_t seed,
                               char** result_json);
LSA_API lsa_status lsa_list_sparse_conditions(const lsa_dictionary* d, int k, int64_t list_size,
                                              uint64_t budget, char** result_json);

/* Bound formulas by name: simplex-radius, euclidean, spherical, mu-k,
   coherence, av-k1, av-k, gen-listapprox-regime, mu-k-upper, uniqueness. */
LSA_API lsa_status lsa_bound(const char* name, const char* params_json, char** result_json);
/* Suites: identity, tight-example, spikes, kerdock, random. csv may be NULL. */
LSA_API lsa_status lsa_verify_suite(const char* suite, uint64_t seed, uint64_t budget,
                                    char** result_json, char** csv, int* violations);

/* Images: square, power-of-two side, pixels in [0, 1]. */
LSA_API lsa_status lsa_image_load_pgm(const char* path, lsa_image** out);
LSA_API lsa_status lsa_image_save_pgm(const lsa_image* img, const char* path, int binary);
LSA_API lsa_status lsa_image_create(int side, const double* pixels, lsa_image** out);
LSA_API lsa_status lsa_image_synthetic_blobs(int side, uint64_t seed, lsa_image** out);
LSA_API int lsa_image_side(const lsa_image* img);
LSA_API const double* lsa_image_pixels(const lsa_image* img);
LSA_API void lsa_image_free(lsa_image* img);
/* Request keys: class (1-3), keep, depth, seed, large, medium, medium_keep. */
LSA_API lsa_status lsa_compress(const lsa_image* img, const char* request_json,
                                lsa_image** reconstruction, char** stats_json);

#ifdef __cplusplus
}
#endif

#endif
