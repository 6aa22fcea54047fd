# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled sampling kernel: one tight C loop per shot.

Bit-identical to the pure kernel by construction; both consume the same
pregenerated noise tables in the same event order.
"""

from libc.stdint cimport uint8_t, uint64_t, int32_t

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    #define fn_popcountll(x) __builtin_popcountll(x)
    #else
    static inline unsigned long long fn_popcountll(unsigned long long v) {
        v = v - ((v >> 1) & 0x5555555555555555ULL);
        v = (v & 0x3333333333333333ULL) + ((v >> 2) & 0x3333333333333333ULL);
        v = (v + (v >> 4)) & 0x0F0F0F0F0F0F0F0FULL;
        return (v * 0x0101010101010101ULL) >> 56;
    }
    #endif
    """
    uint64_t fn_popcountll(uint64_t x) nogil


cdef inline void _inject(uint64_t* fx, uint64_t* fz, int pauli, int q) nogil:
    # pauli index encodes (x << 1) | z; 0 injects nothing
    cdef int word = q >> 6
    cdef int bit = q & 63
    fx[word] ^= (<uint64_t> ((pauli >> 1) & 1)) << bit
    fz[word] ^= (<uint64_t> (pauli & 1)) << bit


cdef inline uint8_t _symplectic(
    uint64_t* fx, uint64_t* fz, const uint64_t* row_x, const uint64_t* row_z, int words
) nogil:
    cdef uint64_t acc = 0
    cdef int w
    for w in range(words):
        acc += fn_popcountll(fx[w] & row_z[w])
        acc += fn_popcountll(fz[w] & row_x[w])
    return <uint8_t> (acc & 1)


def run_batch(
    const uint64_t[:, ::1] ev_x,
    const uint64_t[:, ::1] ev_z,
    const int32_t[::1] ev_qa,
    const int32_t[::1] ev_qb,
    const int32_t[::1] ev_det_ptr,
    const int32_t[::1] ev_det_idx,
    const int32_t[::1] bell_col,
    int noisy_start,
    int e_noisy,
    const int32_t[::1] idle_evt,
    const int32_t[::1] idle_qubit,
    const uint8_t[:, ::1] dep,
    const uint8_t[:, ::1] bell,
    const uint8_t[:, ::1] meas,
    const uint8_t[:, ::1] skip,
    const uint8_t[:, ::1] idle,
    uint8_t[:, ::1] det_out,
    uint8_t[:, ::1] log_out,
    uint8_t[:, ::1] erased_out,
):
    cdef Py_ssize_t shots = dep.shape[0]
    cdef int words = ev_x.shape[1]
    cdef int event_count = ev_qa.shape[0]
    cdef int logical_count = ev_x.shape[0] - event_count
    cdef int idle_count = idle_evt.shape[0]

    cdef uint64_t frame_x[64]
    cdef uint64_t frame_z[64]
    if words > 64:
        raise ValueError("kernel supports up to 4096 qubits")

    cdef Py_ssize_t s
    cdef int e, w, d, col, val, k, idle_cursor, l
    cdef uint8_t flip
    cdef bint skipped, noisy

    with nogil:
        for s in range(shots):
            for w in range(words):
                frame_x[w] = 0
                frame_z[w] = 0
            idle_cursor = 0
            for e in range(event_count):
                noisy = noisy_start <= e and e < e_noisy
                col = bell_col[e]
                skipped = False
                if noisy and col >= 0:
                    skipped = skip[s, col] != 0
                    if not skipped and bell[s, col] != 0:
                        val = bell[s, col]
                        _inject(frame_x, frame_z, val >> 2, ev_qa[e])
                        _inject(frame_x, frame_z, val & 3, ev_qb[e])

                flip = _symplectic(frame_x, frame_z, &ev_x[e, 0], &ev_z[e, 0], words)
                if noisy:
                    flip ^= meas[s, e - noisy_start]
                if skipped:
                    flip = 0
                for d in range(ev_det_ptr[e], ev_det_ptr[e + 1]):
                    det_out[s, ev_det_idx[d]] ^= flip
                    if skipped:
                        erased_out[s, ev_det_idx[d]] = 1

                if noisy and not skipped and dep[s, e - noisy_start] != 0:
                    val = dep[s, e - noisy_start]
                    _inject(frame_x, frame_z, val >> 2, ev_qa[e])
                    _inject(frame_x, frame_z, val & 3, ev_qb[e])

                while idle_cursor < idle_count and idle_evt[idle_cursor] == e:
                    k = idle_cursor
                    if idle[s, k] != 0:
                        _inject(frame_x, frame_z, idle[s, k], idle_qubit[k])
                    idle_cursor += 1

            for l in range(logical_count):
                log_out[s, l] = _symplectic(
                    frame_x, frame_z,
                    &ev_x[event_count + l, 0], &ev_z[event_count + l, 0],
                    words,
                )
