/* C interface to the multiiso shared library.
 *
 * All data crosses the boundary as JSON text. A call produces an opaque
 * result handle carrying the report document and a status code:
 *   0  pass
 *   1  checked fail (the mathematics says no)
 *   2  input or internal error (report is {"command", "error"})
 */
#ifndef MULTIISO_H
#define MULTIISO_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct miso_result miso_result;

/* Runs a command. instance_json may be NULL or empty for parameter-only
 * commands ("canonical", "blaschke", "nonblaschke"); options_json may be
 * NULL. On return *out is always a valid handle (never NULL) that must be
 * released with miso_result_free. Returns the status code. */
int miso_run(const char* command, const char* instance_json,
             const char* options_json, miso_result** out);

/* Report JSON text; owned by the handle, valid until miso_result_free. */
const char* miso_result_json(const miso_result* result);

int miso_result_code(const miso_result* result);

void miso_result_free(miso_result* result);

const char* miso_version(void);

#ifdef __cplusplus
}
#endif

#endif
