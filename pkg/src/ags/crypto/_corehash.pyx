# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled SHA-256 / RIPEMD-160 kernels.

Mirrors ``_purehash`` exactly; selected at import by ``ags.crypto.hashes``
when available.  Hashing dominates the anchoring, replay and tamper-check
paths, so these two inner loops are the package's hot kernels.
"""

from libc.stdint cimport uint8_t, uint32_t, uint64_t
from libc.string cimport memcpy

cdef uint32_t[64] SHA_K
SHA_K[:] = [
    0x428A2F98, 0x71374491, 0xB5C0FBCF, 0xE9B5DBA5, 0x3956C25B, 0x59F111F1,
    0x923F82A4, 0xAB1C5ED5, 0xD807AA98, 0x12835B01, 0x243185BE, 0x550C7DC3,
    0x72BE5D74, 0x80DEB1FE, 0x9BDC06A7, 0xC19BF174, 0xE49B69C1, 0xEFBE4786,
    0x0FC19DC6, 0x240CA1CC, 0x2DE92C6F, 0x4A7484AA, 0x5CB0A9DC, 0x76F988DA,
    0x983E5152, 0xA831C66D, 0xB00327C8, 0xBF597FC7, 0xC6E00BF3, 0xD5A79147,
    0x06CA6351, 0x14292967, 0x27B70A85, 0x2E1B2138, 0x4D2C6DFC, 0x53380D13,
    0x650A7354, 0x766A0ABB, 0x81C2C92E, 0x92722C85, 0xA2BFE8A1, 0xA81A664B,
    0xC24B8B70, 0xC76C51A3, 0xD192E819, 0xD6990624, 0xF40E3585, 0x106AA070,
    0x19A4C116, 0x1E376C08, 0x2748774C, 0x34B0BCB5, 0x391C0CB3, 0x4ED8AA4A,
    0x5B9CCA4F, 0x682E6FF3, 0x748F82EE, 0x78A5636F, 0x84C87814, 0x8CC70208,
    0x90BEFFFA, 0xA4506CEB, 0xBEF9A3F7, 0xC67178F2,
]

cdef inline uint32_t rotr(uint32_t x, int n) nogil:
    return (x >> n) | (x << (32 - n))

cdef inline uint32_t rotl(uint32_t x, int n) nogil:
    return (x << n) | (x >> (32 - n))


cdef void sha_block(uint32_t* h, const uint8_t* p) nogil:
    cdef uint32_t w[64]
    cdef uint32_t a, b, c, d, e, f, g, hh, s0, s1, t1, t2, x
    cdef int i
    for i in range(16):
        w[i] = (<uint32_t>p[4 * i] << 24) | (<uint32_t>p[4 * i + 1] << 16) | \
               (<uint32_t>p[4 * i + 2] << 8) | <uint32_t>p[4 * i + 3]
    for i in range(16, 64):
        x = w[i - 15]
        s0 = rotr(x, 7) ^ rotr(x, 18) ^ (x >> 3)
        x = w[i - 2]
        s1 = rotr(x, 17) ^ rotr(x, 19) ^ (x >> 10)
        w[i] = w[i - 16] + s0 + w[i - 7] + s1
    a = h[0]; b = h[1]; c = h[2]; d = h[3]
    e = h[4]; f = h[5]; g = h[6]; hh = h[7]
    for i in range(64):
        s1 = rotr(e, 6) ^ rotr(e, 11) ^ rotr(e, 25)
        t1 = hh + s1 + ((e & f) ^ (~e & g)) + SHA_K[i] + w[i]
        s0 = rotr(a, 2) ^ rotr(a, 13) ^ rotr(a, 22)
        t2 = s0 + ((a & b) ^ (a & c) ^ (b & c))
        hh = g; g = f; f = e; e = d + t1
        d = c; c = b; b = a; a = t1 + t2
    h[0] += a; h[1] += b; h[2] += c; h[3] += d
    h[4] += e; h[5] += f; h[6] += g; h[7] += hh


def sha256_bytes(data):
    """SHA-256 digest of ``data`` (32 bytes)."""
    cdef const uint8_t[:] view = data
    cdef Py_ssize_t n = view.shape[0]
    cdef uint32_t h[8]
    h[0] = 0x6A09E667; h[1] = 0xBB67AE85; h[2] = 0x3C6EF372; h[3] = 0xA54FF53A
    h[4] = 0x510E527F; h[5] = 0x9B05688C; h[6] = 0x1F83D9AB; h[7] = 0x5BE0CD19
    cdef Py_ssize_t off = 0
    cdef uint8_t tail[128]
    cdef Py_ssize_t rem, padlen, i
    cdef uint64_t bitlen = <uint64_t>n * 8
    with nogil:
        while off + 64 <= n:
            sha_block(h, &view[off])
            off += 64
    rem = n - off
    for i in range(rem):
        tail[i] = view[off + i]
    tail[rem] = 0x80
    padlen = 64 if rem < 56 else 128
    for i in range(rem + 1, padlen - 8):
        tail[i] = 0
    for i in range(8):
        tail[padlen - 1 - i] = <uint8_t>(bitlen >> (8 * i))
    sha_block(h, tail)
    if padlen == 128:
        sha_block(h, &tail[64])
    out = bytearray(32)
    for i in range(8):
        out[4 * i] = (h[i] >> 24) & 0xFF
        out[4 * i + 1] = (h[i] >> 16) & 0xFF
        out[4 * i + 2] = (h[i] >> 8) & 0xFF
        out[4 * i + 3] = h[i] & 0xFF
    return bytes(out)


cdef uint8_t[80] RL
RL[:] = [
    0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15,
    7, 4, 13, 1, 10, 6, 15, 3, 12, 0, 9, 5, 2, 14, 11, 8,
    3, 10, 14, 4, 9, 15, 8, 1, 2, 7, 0, 6, 13, 11, 5, 12,
    1, 9, 11, 10, 0, 8, 12, 4, 13, 3, 7, 15, 14, 5, 6, 2,
    4, 0, 5, 9, 7, 12, 2, 10, 14, 1, 3, 8, 11, 6, 15, 13,
]
cdef uint8_t[80] RR
RR[:] = [
    5, 14, 7, 0, 9, 2, 11, 4, 13, 6, 15, 8, 1, 10, 3, 12,
    6, 11, 3, 7, 0, 13, 5, 10, 14, 15, 8, 12, 4, 9, 1, 2,
    15, 5, 1, 3, 7, 14, 6, 9, 11, 8, 12, 2, 10, 0, 4, 13,
    8, 6, 4, 1, 3, 11, 15, 0, 5, 12, 2, 13, 9, 7, 10, 14,
    12, 15, 10, 4, 1, 5, 8, 7, 6, 2, 13, 14, 0, 3, 9, 11,
]
cdef uint8_t[80] SL
SL[:] = [
    11, 14, 15, 12, 5, 8, 7, 9, 11, 13, 14, 15, 6, 7, 9, 8,
    7, 6, 8, 13, 11, 9, 7, 15, 7, 12, 15, 9, 11, 7, 13, 12,
    11, 13, 6, 7, 14, 9, 13, 15, 14, 8, 13, 6, 5, 12, 7, 5,
    11, 12, 14, 15, 14, 15, 9, 8, 9, 14, 5, 6, 8, 6, 5, 12,
    9, 15, 5, 11, 6, 8, 13, 12, 5, 12, 13, 14, 11, 8, 5, 6,
]
cdef uint8_t[80] SR
SR[:] = [
    8, 9, 9, 11, 13, 15, 15, 5, 7, 7, 8, 11, 14, 14, 12, 6,
    9, 13, 15, 7, 12, 8, 9, 11, 7, 7, 12, 7, 6, 15, 13, 11,
    9, 7, 15, 11, 8, 6, 6, 14, 12, 13, 5, 14, 13, 13, 7, 5,
    15, 5, 8, 11, 14, 14, 6, 14, 6, 9, 12, 9, 12, 5, 15, 8,
    8, 5, 12, 9, 12, 5, 14, 6, 8, 13, 6, 5, 15, 13, 11, 11,
]
cdef uint32_t[5] KL
KL[:] = [0x00000000, 0x5A827999, 0x6ED9EBA1, 0x8F1BBCDC, 0xA953FD4E]
cdef uint32_t[5] KR
KR[:] = [0x50A28BE6, 0x5C4DD124, 0x6D703EF3, 0x7A6D76E9, 0x00000000]


cdef inline uint32_t rmd_f(int j, uint32_t x, uint32_t y, uint32_t z) nogil:
    if j < 16:
        return x ^ y ^ z
    elif j < 32:
        return (x & y) | (~x & z)
    elif j < 48:
        return (x | ~y) ^ z
    elif j < 64:
        return (x & z) | (y & ~z)
    return x ^ (y | ~z)


cdef void rmd_block(uint32_t* h, const uint8_t* p) nogil:
    cdef uint32_t x[16]
    cdef uint32_t al, bl, cl, dl, el, ar, br, cr, dr, er, t
    cdef int j, rnd
    for j in range(16):
        x[j] = (<uint32_t>p[4 * j]) | (<uint32_t>p[4 * j + 1] << 8) | \
               (<uint32_t>p[4 * j + 2] << 16) | (<uint32_t>p[4 * j + 3] << 24)
    al = h[0]; bl = h[1]; cl = h[2]; dl = h[3]; el = h[4]
    ar = h[0]; br = h[1]; cr = h[2]; dr = h[3]; er = h[4]
    for j in range(80):
        rnd = j >> 4
        t = rotl(al + rmd_f(j, bl, cl, dl) + x[RL[j]] + KL[rnd], SL[j]) + el
        al = el; el = dl; dl = rotl(cl, 10); cl = bl; bl = t
        t = rotl(ar + rmd_f(79 - j, br, cr, dr) + x[RR[j]] + KR[rnd], SR[j]) + er
        ar = er; er = dr; dr = rotl(cr, 10); cr = br; br = t
    t = h[1] + cl + dr
    h[1] = h[2] + dl + er
    h[2] = h[3] + el + ar
    h[3] = h[4] + al + br
    h[4] = h[0] + bl + cr
    h[0] = t


def ripemd160_bytes(data):
    """RIPEMD-160 digest of ``data`` (20 bytes)."""
    cdef const uint8_t[:] view = data
    cdef Py_ssize_t n = view.shape[0]
    cdef uint32_t h[5]
    h[0] = 0x67452301; h[1] = 0xEFCDAB89; h[2] = 0x98BADCFE
    h[3] = 0x10325476; h[4] = 0xC3D2E1F0
    cdef Py_ssize_t off = 0
    cdef uint8_t tail[128]
    cdef Py_ssize_t rem, padlen, i
    cdef uint64_t bitlen = <uint64_t>n * 8
    with nogil:
        while off + 64 <= n:
            rmd_block(h, &view[off])
            off += 64
    rem = n - off
    for i in range(rem):
        tail[i] = view[off + i]
    tail[rem] = 0x80
    padlen = 64 if rem < 56 else 128
    for i in range(rem + 1, padlen - 8):
        tail[i] = 0
    for i in range(8):
        tail[padlen - 8 + i] = <uint8_t>(bitlen >> (8 * i))
    rmd_block(h, tail)
    if padlen == 128:
        rmd_block(h, &tail[64])
    out = bytearray(20)
    for i in range(5):
        out[4 * i] = h[i] & 0xFF
        out[4 * i + 1] = (h[i] >> 8) & 0xFF
        out[4 * i + 2] = (h[i] >> 16) & 0xFF
        out[4 * i + 3] = (h[i] >> 24) & 0xFF
    return bytes(out)
