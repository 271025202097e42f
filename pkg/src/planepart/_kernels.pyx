# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: divisor-square sieve and the PL(n) recurrence on GMP integers."""

from libc.stdlib cimport malloc, free
from libc.string cimport memset
from cpython.bytes cimport PyBytes_FromStringAndSize, PyBytes_AS_STRING


cdef extern from "gmp.h" nogil:
    ctypedef struct __mpz_struct:
        pass
    ctypedef __mpz_struct* mpz_ptr
    ctypedef const __mpz_struct* mpz_srcptr

    void mpz_init(mpz_ptr)
    void mpz_clear(mpz_ptr)
    void mpz_set_ui(mpz_ptr, unsigned long)
    void mpz_addmul_ui(mpz_ptr, mpz_srcptr, unsigned long)
    void mpz_divexact_ui(mpz_ptr, mpz_srcptr, unsigned long)
    void mpz_import(mpz_ptr, size_t, int, size_t, int, size_t, const void*)
    void* mpz_export(void*, size_t*, int, size_t, int, size_t, mpz_srcptr)
    size_t mpz_sizeinbase(mpz_srcptr, int)


BACKEND = "cython-gmp"


def sigma2_sieve(Py_ssize_t limit):
    """Return a list ``s`` with ``s[k] = sum of d**2 over d | k`` for 0 <= k <= limit (s[0] = 0)."""
    cdef unsigned long long* buf
    cdef Py_ssize_t d, m
    cdef unsigned long long d2
    if limit < 1:
        raise ValueError("limit must be >= 1")
    buf = <unsigned long long*> malloc((limit + 1) * sizeof(unsigned long long))
    if buf == NULL:
        raise MemoryError()
    try:
        memset(buf, 0, (limit + 1) * sizeof(unsigned long long))
        with nogil:
            for d in range(1, limit + 1):
                d2 = <unsigned long long> d * <unsigned long long> d
                m = d
                while m <= limit:
                    buf[m] += d2
                    m += d
        return [buf[m] for m in range(limit + 1)]
    finally:
        free(buf)


cdef void _load(mpz_ptr z, object value):
    cdef bytes raw
    cdef Py_ssize_t nbytes = (value.bit_length() + 7) // 8
    if nbytes == 0:
        mpz_set_ui(z, 0)
        return
    raw = value.to_bytes(nbytes, "little")
    mpz_import(z, nbytes, -1, 1, 0, 0, PyBytes_AS_STRING(raw))


cdef object _dump(mpz_srcptr z):
    cdef size_t nbytes = (mpz_sizeinbase(z, 2) + 7) // 8
    cdef size_t count = 0
    cdef bytes raw = PyBytes_FromStringAndSize(NULL, nbytes)
    mpz_export(PyBytes_AS_STRING(raw), &count, -1, 1, 0, 0, z)
    if count == 0:
        return 0
    return int.from_bytes(raw[:count], "little")


def pl_extend(list prefix, sigma, Py_ssize_t new_limit):
    """Extend ``prefix = [PL(0), ..., PL(m-1)]`` through ``new_limit``.

    ``sigma[k]`` must hold sigma_2(k) for 1 <= k <= new_limit.  Returns the
    list of new values PL(m), ..., PL(new_limit).
    """
    cdef Py_ssize_t start = len(prefix)
    cdef Py_ssize_t total = new_limit + 1
    cdef Py_ssize_t n, k
    cdef unsigned long* sig
    cdef __mpz_struct* vals
    cdef __mpz_struct acc[1]
    if start == 0:
        raise ValueError("prefix must contain PL(0)")
    if new_limit < start:
        return []
    if len(sigma) < total:
        raise ValueError("sigma table shorter than new_limit + 1")

    sig = <unsigned long*> malloc(total * sizeof(unsigned long))
    vals = <__mpz_struct*> malloc(total * sizeof(__mpz_struct))
    if sig == NULL or vals == NULL:
        free(sig)
        free(vals)
        raise MemoryError()
    for k in range(total):
        sig[k] = <unsigned long> sigma[k]
        mpz_init(&vals[k])
    mpz_init(acc)
    try:
        for k in range(start):
            _load(&vals[k], prefix[k])
        with nogil:
            for n in range(start, total):
                mpz_set_ui(acc, 0)
                for k in range(1, n + 1):
                    mpz_addmul_ui(acc, &vals[n - k], sig[k])
                mpz_divexact_ui(&vals[n], acc, <unsigned long> n)
        return [_dump(&vals[n]) for n in range(start, total)]
    finally:
        mpz_clear(acc)
        for k in range(total):
            mpz_clear(&vals[k])
        free(vals)
        free(sig)
