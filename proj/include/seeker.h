/* C interface to the exception-handling engine.
 *
 * Usage pattern:
 *   seeker_engine* eng = NULL;
 *   if (seeker_engine_create("{\"flags\":{\"cee\":\"data/cee.json\"}}", &eng) != SEEKER_OK) {
 *       fprintf(stderr, "%s\n", seeker_last_error(NULL));
 *       ...
 *   }
 *   char* report = NULL;
 *   seeker_status st = seeker_analyze(eng, "src/", "out/", &report);
 *   ...
 *   seeker_string_free(report);
 *   seeker_engine_destroy(eng);
 *
 * Every char** output is allocated by the library and must be released with
 * seeker_string_free. All strings are UTF-8.
 */
#ifndef SEEKER_H
#define SEEKER_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct seeker_engine seeker_engine;

typedef enum {
    SEEKER_OK = 0,               /* success */
    SEEKER_FAIL = 1,             /* domain-level failure: a unit-level handling
                                    failure, a validation failure, or an
                                    unknown lookup; outputs are still valid */
    SEEKER_FATAL = 2,            /* unrecoverable: bad input path, unreadable
                                    data, transport breakdown */
    SEEKER_INVALID_ARGUMENT = 3  /* null handle or required argument */
} seeker_status;

/* options_json: {"config_file": "path"?, "flags": {...}} where flags holds
 * any subset of the run-configuration keys (cee, labels, out, alpha, beta,
 * gamma, delta, theta, depth, max_unit_lines, concurrency, mock, endpoint,
 * model, api_key). Precedence: flags > environment (SEEKER_API_KEY,
 * SEEKER_ENDPOINT) > config file > defaults. NULL means all defaults.
 * On failure *out_engine is NULL and seeker_last_error(NULL) explains. */
seeker_status seeker_engine_create(const char* options_json, seeker_engine** out_engine);
void seeker_engine_destroy(seeker_engine* engine);

/* Message of the most recent failing call on this engine; with a NULL engine,
 * the most recent engine-creation failure on this thread. Owned by the
 * library; valid until the next call on the same engine/thread. */
const char* seeker_last_error(const seeker_engine* engine);

/* Effective resolved configuration as JSON (api key redacted). */
seeker_status seeker_effective_config(seeker_engine* engine, char** out_json);

/* Runs the analysis pipeline over a .java file or a directory tree of .java
 * files. When out_dir is non-NULL, writes the optimized sources (mirroring
 * relative paths), per-file unified diffs, and report.json under it.
 * *out_report_json receives the full analysis report. Returns SEEKER_FAIL
 * when any unit reports a handling failure. */
seeker_status seeker_analyze(seeker_engine* engine, const char* input_path,
                             const char* out_dir, char** out_report_json);

/* Runs the pipeline over a stripped-corpus directory (fragile snippets with
 * ground-truth sidecars; manifest.json verified when present) and scores the
 * result. Outputs: metrics report JSON and the plain-text metrics table. */
seeker_status seeker_evaluate(seeker_engine* engine, const char* corpus_dir,
                              char** out_report_json, char** out_table_text);

/* "N nodes, B branches, depth D" for the configured knowledge base. */
seeker_status seeker_cee_stats(seeker_engine* engine, char** out_line);

/* SEEKER_OK with an empty diagnostics string when the knowledge base is
 * well-formed; SEEKER_FAIL with the diagnostics when it is not. */
seeker_status seeker_cee_validate(seeker_engine* engine, char** out_diagnostics);

/* Full node record as JSON; SEEKER_FAIL for an unknown node name. */
seeker_status seeker_cee_query(seeker_engine* engine, const char* node_name,
                               char** out_node_json);

/* Strips try/catch/finally handlers from every .java file in input_dir,
 * writing fragile variants, ground-truth sidecars, and manifest.json to
 * out_dir. Files the parser cannot handle are skipped with a diagnostic.
 * *out_manifest_json receives the manifest. */
seeker_status seeker_corpus_strip(seeker_engine* engine, const char* input_dir,
                                  const char* out_dir, char** out_manifest_json);

/* Scores repositories from a metadata JSON file with the composite quality
 * metric. weights_json maps dimension name to weight; NULL = equal weights.
 * *out_table_text receives "name score" lines, best first. */
seeker_status seeker_corpus_score(seeker_engine* engine, const char* repos_path,
                                  const char* weights_json, char** out_table_text);

/* Total language-model transport invocations made through this engine. */
long seeker_transport_calls(const seeker_engine* engine);

/* Network requests issued; always 0 in mock mode. */
long seeker_network_calls(const seeker_engine* engine);

void seeker_string_free(char* s);

const char* seeker_version(void);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SEEKER_H */
