#ifndef COLLINEAR_LAB_H
#define COLLINEAR_LAB_H

/* C interface to the collinear-lab core.  Every call returns a clab_status;
 * on failure clab_last_error() holds a one-line reason (per thread).  Objects
 * are opaque and owned by the caller, who releases them with the matching
 * *_free function.  Strings returned by accessors live as long as their
 * object. */

#include <stddef.h>
#include <stdint.h>

#if defined(CLAB_BUILDING_LIBRARY)
#define CLAB_API __attribute__((visibility("default")))
#else
#define CLAB_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clab_status {
  CLAB_OK = 0,
  CLAB_ERR_INVALID_ARGUMENT,
  CLAB_ERR_PARSE,
  CLAB_ERR_DIMENSION,
  CLAB_ERR_DEGENERATE_LINE,
  CLAB_ERR_DEGENERATE_SLOPE,
  CLAB_ERR_OUT_OF_WINDOW,
  CLAB_ERR_THIN_CYLINDER,
  CLAB_ERR_NON_TRANSVERSE,
  CLAB_ERR_INFEASIBLE,
  CLAB_ERR_IO,
  CLAB_ERR_INTERNAL
} clab_status;

typedef struct clab_pointset clab_pointset;
typedef struct clab_map clab_map;
typedef struct clab_result clab_result;

CLAB_API const char* clab_status_name(clab_status status);
CLAB_API const char* clab_last_error(void);

/* ---- point sets (sorted, duplicate free) */
CLAB_API clab_status clab_pointset_load(const char* path, clab_pointset** out);
CLAB_API clab_status clab_pointset_parse(const char* text, clab_pointset** out);
/* coords holds count * dim integers, point after point. */
CLAB_API clab_status clab_pointset_from_coords(size_t dim, size_t count, const int64_t* coords, clab_pointset** out);
CLAB_API size_t clab_pointset_size(const clab_pointset* set);
CLAB_API size_t clab_pointset_dim(const clab_pointset* set);
CLAB_API clab_status clab_pointset_get(const clab_pointset* set, size_t index, int64_t* coords);
CLAB_API clab_status clab_pointset_save(const clab_pointset* set, const char* path);
CLAB_API void clab_pointset_free(clab_pointset* set);

/* ---- Lipschitz maps on box windows */
CLAB_API clab_status clab_map_load(const char* path, clab_map** out);
CLAB_API clab_status clab_map_parse(const char* text, clab_map** out);
CLAB_API clab_status clab_map_save(const clab_map* map, const char* path);
CLAB_API size_t clab_map_domain_dim(const clab_map* map);
CLAB_API size_t clab_map_image_dim(const clab_map* map);
/* y receives image_dim integers. */
CLAB_API clab_status clab_map_eval(const clab_map* map, const int64_t* x, int64_t* y);
CLAB_API void clab_map_free(clab_map* map);

/* kind: flat, affine, surface, walk, walk-lift, staircase, random.
 * window: "lo:hi" per axis (one range is repeated over all d axes). */
CLAB_API clab_status clab_generate_map(const char* kind, size_t d, size_t codim, int64_t slope, const char* window,
                                       uint64_t seed, clab_map** out);
/* kind: all, coset (param = stride), bernoulli (param = p as "num/den"). */
CLAB_API clab_status clab_generate_set(const char* kind, size_t d, const char* window, const char* param,
                                       uint64_t seed, clab_pointset** out);
/* Walk in Z^2 from the origin with nonzero steps of length <= max_gap;
 * coords receives 2 * length integers. */
CLAB_API clab_status clab_generate_walk(size_t length, const char* max_gap, uint64_t seed, int64_t* coords);
/* Lifts a sequence of count points of Z^dim (dim >= 2) with average gap
 * <= avg_bound to a 1-Lipschitz map on an interval and its position set. */
CLAB_API clab_status clab_sequence_to_path(size_t dim, size_t count, const int64_t* coords, const char* avg_bound,
                                           clab_map** map, clab_pointset** set);

/* ---- reports.  Every operation below fills a clab_result with a plain-text
 * report, a TSV rendering, key/value fields and a found flag. */
CLAB_API const char* clab_result_text(const clab_result* result);
CLAB_API const char* clab_result_tsv(const clab_result* result);
CLAB_API int clab_result_found(const clab_result* result);
/* NULL when the key is absent. */
CLAB_API const char* clab_result_get(const clab_result* result, const char* key);
CLAB_API void clab_result_free(clab_result* result);

/* mode: "neighbors" or "all-pairs". */
CLAB_API clab_status clab_validate(const clab_map* map, const char* mode, clab_result** out);
/* engine: "naive" or "hash". */
CLAB_API clab_status clab_collinear(const clab_pointset* points, const char* engine, unsigned threads,
                                    clab_result** out);
/* Least X in A with |X| = k and f(X) on a line. */
CLAB_API clab_status clab_find_k(const clab_map* map, const clab_pointset* set, size_t k, unsigned threads,
                                 clab_result** out);
CLAB_API clab_status clab_density(const clab_pointset* set, const int64_t* sides, size_t count, clab_result** out);
/* start, end: rational points "x,y"; w: rational direction of image dimension. */
CLAB_API clab_status clab_cylinder_check(const clab_map* map, const clab_pointset* set, const char* start,
                                         const char* end, const char* epsilon, const char* delta, const char* w,
                                         clab_result** out);
/* w may be NULL: the sign-pattern direction grid is scanned. */
CLAB_API clab_status clab_cylinder_scan(const clab_map* map, const clab_pointset* set, const char* epsilon,
                                        const char* delta, const char* w, size_t budget, uint64_t seed,
                                        unsigned threads, clab_result** out);
/* u: rationals separated by ',' or ' '. */
CLAB_API clab_status clab_dirichlet(const char* u, int64_t n, clab_result** out);
CLAB_API clab_status clab_cover(const clab_map* map, const clab_pointset* set, size_t k, int64_t n, const char* delta,
                                size_t budget, uint64_t seed, unsigned threads, clab_result** out);

typedef struct clab_estimate_options {
  size_t budget;
  size_t restarts;
  uint64_t seed;
  unsigned threads;
  int64_t max_side;
  const char* archive_dir; /* prior witnesses, may be NULL */
  const char* save_stem;   /* writes <stem>.map and <stem>.set, may be NULL */
} clab_estimate_options;

CLAB_API void clab_estimate_options_init(clab_estimate_options* options);
CLAB_API clab_status clab_estimate_l(size_t d, size_t k, const char* delta, const char* m,
                                     const clab_estimate_options* options, clab_result** out);
/* out_map / out_set may be NULL. */
CLAB_API clab_status clab_glue(const char* manifest, const char* out_map, const char* out_set, clab_result** out);

#ifdef __cplusplus
}
#endif

#endif
