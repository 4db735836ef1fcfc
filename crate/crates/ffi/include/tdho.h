/* C interface for the tdho invariant library.
 *
 * Conventions:
 *  - every fallible function returns an int status code (TDHO_OK = 0);
 *    on failure tdho_last_error_message() describes the problem,
 *  - objects are opaque handles released with the matching _free
 *    function,
 *  - strings returned through out-parameters are owned by the caller
 *    and released with tdho_string_free().
 */

#ifndef TDHO_H
#define TDHO_H

#ifdef __cplusplus
extern "C" {
#endif

#define TDHO_OK 0
/* Null pointer or otherwise unusable argument. */
#define TDHO_ERR_INVALID_ARGUMENT 1
/* Expression or configuration failed to parse / validate. */
#define TDHO_ERR_PARSE 2
/* Evaluation hit a domain error. */
#define TDHO_ERR_EVAL 3
/* The run aborted (integration failure, I/O, ...). */
#define TDHO_ERR_RUN 4

typedef struct TdhoExpr TdhoExpr;
typedef struct TdhoConfig TdhoConfig;

/* Message for the most recent failure on this thread. Never null;
 * empty before the first failure. Invalidated by the next failing call
 * on the same thread. */
const char *tdho_last_error_message(void);

/* Parse an expression of the variable t into *out. */
int tdho_expr_parse(const char *source, TdhoExpr **out);

/* Evaluate the expression at time t into *value. */
int tdho_expr_eval(const TdhoExpr *expr, double t, double *value);

/* Symbolic derivative with respect to t, as a new handle in *out. */
int tdho_expr_diff(const TdhoExpr *expr, TdhoExpr **out);

/* Render the expression; the result re-parses to an equivalent
 * expression. Free with tdho_string_free(). */
int tdho_expr_to_string(const TdhoExpr *expr, char **out);

/* Release an expression handle. Null is a no-op. */
void tdho_expr_free(TdhoExpr *expr);

/* Parse and validate a JSON run configuration (same schema as the
 * CLI) into *out. */
int tdho_config_parse(const char *json, TdhoConfig **out);

/* Release a configuration handle. Null is a no-op. */
void tdho_config_free(TdhoConfig *config);

/* Execute the configured checks and store the run report as a JSON
 * string in *report_json (free with tdho_string_free()). out_dir may
 * be null; when given, time series and the report are also written
 * there as JSON files. Returns TDHO_OK whenever the run executed,
 * whether or not the checks passed; read overall_pass in the report
 * for the verdict. */
int tdho_run(const TdhoConfig *config, const char *out_dir,
             char **report_json);

/* Release a string returned by this library. Null is a no-op. */
void tdho_string_free(char *s);

#ifdef __cplusplus
}
#endif

#endif /* TDHO_H */
