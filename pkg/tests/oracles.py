"""Independent reference implementations used as test oracles.

Everything here is deliberately written with different algorithms than the
package (affine coordinates with per-step inversion, schoolbook long
division for base58, extended Euclid for inverses) so agreement is
meaningful.
"""

from __future__ import annotations


def egcd_inv(a: int, m: int) -> int:
    """Modular inverse by extended Euclid (package uses Fermat pow)."""
    a %= m
    old_r, r = a, m
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise ValueError("not invertible")
    return old_s % m


# affine EC arithmetic; points are (x, y) tuples, None is infinity
def affine_add(p1, p2, p: int, a: int):
    if p1 is None:
        return p2
    if p2 is None:
        return p1
    x1, y1 = p1
    x2, y2 = p2
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if p1 == p2:
        m = (3 * x1 * x1 + a) * egcd_inv(2 * y1, p) % p
    else:
        m = (y2 - y1) * egcd_inv(x2 - x1, p) % p
    x3 = (m * m - x1 - x2) % p
    return (x3, (m * (x1 - x3) - y1) % p)


def affine_mul(k: int, point, p: int, a: int):
    """Plain left-to-right double-and-add in affine coordinates."""
    result = None
    for bit in bin(k)[2:] if k else "":
        result = affine_add(result, result, p, a)
        if bit == "1":
            result = affine_add(result, point, p, a)
    return result


def textbook_sign(d: int, z_int: int, k: int, curve) -> tuple[int, int]:
    """Evaluate the two signing equations directly; caller supplies k."""
    n = curve.n
    gx_gy = (curve.gx, curve.gy)
    R = affine_mul(k, gx_gy, curve.p, curve.a)
    r = R[0] % n
    s = egcd_inv(k, n) * (z_int % n + r * d) % n
    return r, s


def textbook_verify(qx: int, qy: int, z_int: int, r: int, s: int, curve) -> bool:
    n = curve.n
    if not (1 <= r < n and 1 <= s < n):
        return False
    w = egcd_inv(s, n)
    u1 = (z_int % n) * w % n
    u2 = r * w % n
    pt = affine_add(
        affine_mul(u1, (curve.gx, curve.gy), curve.p, curve.a),
        affine_mul(u2, (qx, qy), curve.p, curve.a),
        curve.p,
        curve.a,
    )
    if pt is None:
        return False
    return pt[0] % n == r


_B58 = "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz"


def schoolbook_b58(data: bytes) -> str:
    """Base58 by repeated byte-array division (no big ints)."""
    digits = [0]
    for byte in data:
        carry = byte
        for i in range(len(digits)):
            carry += digits[i] << 8
            digits[i] = carry % 58
            carry //= 58
        while carry:
            digits.append(carry % 58)
            carry //= 58
    zeros = 0
    for byte in data:
        if byte:
            break
        zeros += 1
    if not any(digits):
        return "1" * zeros
    return "1" * zeros + "".join(_B58[d] for d in reversed(digits))


def product_collision_probability(n: int, d: int) -> float:
    """Direct product evaluation, written independently."""
    if n > d:
        return 1.0
    acc = 1.0
    k = 0
    while k < n:
        acc = acc * (d - k) / d
        k += 1
    return 1.0 - acc
