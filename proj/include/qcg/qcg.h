/* C interface to the quantum game engine. Requests and results are JSON
 * strings; results are allocated by the library and released with qcg_free. */
#ifndef QCG_QCG_H
#define QCG_QCG_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define QCG_API __declspec(dllexport)
#else
#define QCG_API __attribute__((visibility("default")))
#endif

typedef enum qcg_status {
    QCG_OK = 0,
    QCG_FAILED = 1,    /* ran, but a check failed or the port would not bind */
    QCG_INPUT = 2,     /* malformed or invalid input */
    QCG_RESOURCE = 3,  /* node or time limit reached */
    QCG_INTERNAL = 4
} qcg_status;

typedef struct qcg_service qcg_service;

/* Every call below stores a JSON document in *out, also on failure, where it
 * holds {"error":{"code","reason"}}. */

/* {"game": instance document, "config": {...}, "state": {"superposition", "to_move"}?,
 *  "limits": {"max_nodes", "max_seconds"}} */
QCG_API qcg_status qcg_solve(const char* request, char** out);
/* {"suite": name | "all", "seed": n, "count": n?} */
QCG_API qcg_status qcg_verify(const char* request, char** out);
/* {"kind": name, "input": game document} -> {"target": ..., "provenance": ...} */
QCG_API qcg_status qcg_reduce(const char* request, char** out);
/* {"instances": [{"name", "game"}], "config": {...}, "limits": {...}, "jobs": n} */
QCG_API qcg_status qcg_bench(const char* request, char** out);

/* {"snapshot": path?, "static_dir": path?, "engine_seconds": s?, "threads": n?} */
QCG_API qcg_status qcg_service_new(const char* options, qcg_service** svc, char** out);
/* Binds "host:port"; *out receives {"port": n}. */
QCG_API qcg_status qcg_service_bind(qcg_service* svc, const char* listen, char** out);
/* Serves until qcg_service_stop. */
QCG_API qcg_status qcg_service_run(qcg_service* svc);
QCG_API void qcg_service_stop(qcg_service* svc);
QCG_API void qcg_service_free(qcg_service* svc);

QCG_API void qcg_free(char* p);
QCG_API const char* qcg_version(void);

#ifdef __cplusplus
}
#endif

#endif
