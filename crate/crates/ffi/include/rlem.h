#ifndef RLEM_H
#define RLEM_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum RlemStatus {
  RLEM_STATUS_OK = 0,
  RLEM_STATUS_NULL_POINTER = 1,
  RLEM_STATUS_INVALID_UTF8 = 2,
  RLEM_STATUS_PARSE = 3,
  RLEM_STATUS_OUT_OF_RANGE = 4,
  RLEM_STATUS_SIMULATION = 5,
  // The call completed and the answer is no.
  RLEM_STATUS_NEGATIVE = 6,
  RLEM_STATUS_BUFFER_TOO_SMALL = 7,
  RLEM_STATUS_PANIC = 8,
} RlemStatus;

typedef enum RlemVerdict {
  RLEM_VERDICT_ACCEPT = 0,
  RLEM_VERDICT_REJECT = 1,
  RLEM_VERDICT_HALTED = 2,
  RLEM_VERDICT_RUNNING = 3,
  RLEM_VERDICT_WINDOW_EXCEEDED = 4,
} RlemVerdict;

// A compiled circuit together with its current configuration.
typedef struct RlemCircuit RlemCircuit;

// A reversible Turing machine.
typedef struct RlemRtm RlemRtm;

// A 2-state RLEM.
typedef struct RlemTable RlemTable;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the calling thread's last error message into `buf`. `needed`
// receives the size including the terminator; pass a null `buf` with
// `len` 0 to query it.
//
// # Safety
// `buf` must be null or valid for `len` bytes; `needed` null or writable.
enum RlemStatus rlem_last_error(char *buf, size_t len, size_t *needed);

// Counts equivalence classes of 2-state `k`-symbol RLEMs, `1 <= k <= 4`.
//
// # Safety
// Out pointers must be null or writable.
enum RlemStatus rlem_census(size_t k, uint64_t *total, size_t *classes, size_t *nondegenerate);

// Parses `K-N`, `RE`, `perm=...` or `rlem k=K perm=...`.
//
// # Safety
// `spec` must be a NUL-terminated string; `table` writable.
enum RlemStatus rlem_table_parse(const char *spec, struct RlemTable **table);

// # Safety
// `table` must be null or a handle from [`rlem_table_parse`] not yet freed.
void rlem_table_free(struct RlemTable *table);

// Symbol count and serial number; `canonical` receives the class
// representative's serial.
//
// # Safety
// `table` must be a live handle; out pointers null or writable.
enum RlemStatus rlem_table_id(const struct RlemTable *table,
                              size_t *k,
                              uint64_t *serial,
                              uint64_t *canonical);

// One move: from `state` on `input`, the next state and output symbol.
//
// # Safety
// `table` must be a live handle; out pointers writable.
enum RlemStatus rlem_table_step(const struct RlemTable *table,
                                size_t state,
                                size_t input,
                                size_t *next,
                                size_t *output);

// `Ok` if the two RLEMs are equivalent under renaming, `Negative` if not.
//
// # Safety
// Both handles must be live.
enum RlemStatus rlem_table_equivalent(const struct RlemTable *a, const struct RlemTable *b);

// Parses and compiles a netlist; the circuit starts in its declared
// initial configuration.
//
// # Safety
// `netlist` must be a NUL-terminated string; `circuit` writable.
enum RlemStatus rlem_circuit_parse(const char *netlist, struct RlemCircuit **circuit);

// # Safety
// `circuit` must be null or a handle from [`rlem_circuit_parse`] not yet
// freed.
void rlem_circuit_free(struct RlemCircuit *circuit);

// # Safety
// `circuit` must be a live handle; out pointers null or writable.
enum RlemStatus rlem_circuit_shape(const struct RlemCircuit *circuit,
                                   size_t *inputs,
                                   size_t *outputs,
                                   size_t *elements);

// Restores the declared initial configuration.
//
// # Safety
// `circuit` must be a live handle.
enum RlemStatus rlem_circuit_reset(struct RlemCircuit *circuit);

// Sends a token into input port `input`; `output` receives the port it
// leaves by and `steps` the number of element transitions.
//
// # Safety
// `circuit` must be a live handle; `output` writable, `steps` null or
// writable.
enum RlemStatus rlem_circuit_inject(struct RlemCircuit *circuit,
                                    size_t input,
                                    size_t *output,
                                    size_t *steps);

// Runs a token backwards from output port `output`.
//
// # Safety
// `circuit` must be a live handle; `input` writable.
enum RlemStatus rlem_circuit_backward(struct RlemCircuit *circuit, size_t output, size_t *input);

// Copies the element states into `states`, which holds `len` entries.
//
// # Safety
// `circuit` must be a live handle; `states` valid for `len` entries.
enum RlemStatus rlem_circuit_states(const struct RlemCircuit *circuit, size_t *states, size_t len);

// `Ok` if the circuit simulates `target` (an RLEM spec) with positional
// port maps, `Negative` otherwise. Without a declared state map one is
// derived.
//
// # Safety
// `circuit` must be a live handle; `target` a NUL-terminated string.
enum RlemStatus rlem_circuit_verify(const struct RlemCircuit *circuit, const char *target);

// # Safety
// `source` must be a NUL-terminated string; `rtm` writable.
enum RlemStatus rlem_rtm_parse(const char *source, struct RlemRtm **rtm);

// # Safety
// `rtm` must be null or a handle from [`rlem_rtm_parse`] not yet freed.
void rlem_rtm_free(struct RlemRtm *rtm);

// `Ok` if the machine is deterministic and reversible, `Negative` with
// the first violation otherwise.
//
// # Safety
// `rtm` must be a live handle.
enum RlemStatus rlem_rtm_check(const struct RlemRtm *rtm);

// Interprets the machine on `input`, a word of one-character symbols.
//
// # Safety
// `rtm` must be a live handle; `input` a NUL-terminated string; `verdict`
// writable, `steps` null or writable.
enum RlemStatus rlem_rtm_run(const struct RlemRtm *rtm,
                             const char *input,
                             size_t fuel,
                             enum RlemVerdict *verdict,
                             size_t *steps);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RLEM_H */
