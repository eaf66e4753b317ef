"""Short-Weierstrass elliptic-curve group arithmetic over prime fields.

Two curves ship: a 19-point toy curve small enough for exhaustive group
checks, and secp256k1 for realistic keys.  The public API works on affine
points; scalar multiplication runs in Jacobian coordinates so the only
field inversion happens at the end.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache


class CurveError(ValueError):
    """Invalid curve parameters or a point that is not on the curve."""


@dataclass(frozen=True)
class ECPoint:
    """Affine point; ``x is None`` encodes the point at infinity."""

    x: int | None
    y: int | None

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "ECPoint(infinity)"
        return f"ECPoint({self.x:#x}, {self.y:#x})"


INFINITY = ECPoint(None, None)


@dataclass(frozen=True)
class CurveParams:
    """y^2 = x^3 + ax + b over F_p with generator G of prime order n."""

    name: str
    p: int
    a: int
    b: int
    gx: int
    gy: int
    n: int

    def __post_init__(self) -> None:
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise CurveError(f"singular curve: {self.name}")
        if not self.contains(self.G):
            raise CurveError(f"generator not on curve: {self.name}")

    @property
    def G(self) -> ECPoint:
        return ECPoint(self.gx, self.gy)

    @property
    def coord_width(self) -> int:
        """Byte width of a field coordinate."""
        return (self.p.bit_length() + 7) // 8

    @property
    def scalar_width(self) -> int:
        """Byte width of a group scalar (signature components)."""
        return (self.n.bit_length() + 7) // 8

    def contains(self, point: ECPoint) -> bool:
        if point.is_infinity:
            return True
        x, y = point.x, point.y
        if not (0 <= x < self.p and 0 <= y < self.p):
            return False
        return (y * y - (x * x * x + self.a * x + self.b)) % self.p == 0

    def require(self, point: ECPoint) -> ECPoint:
        if not self.contains(point):
            raise CurveError(f"point not on curve {self.name}: {point!r}")
        return point


TOY = CurveParams(name="toy", p=17, a=2, b=2, gx=5, gy=1, n=19)

SECP256K1 = CurveParams(
    name="secp256k1",
    p=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F,
    a=0,
    b=7,
    gx=0x79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798,
    gy=0x483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8,
    n=0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141,
)

CURVES = {c.name: c for c in (TOY, SECP256K1)}


def get_curve(name: str) -> CurveParams:
    try:
        return CURVES[name]
    except KeyError:
        raise CurveError(f"unknown curve: {name!r}") from None


def ec_add(p1: ECPoint, p2: ECPoint, curve: CurveParams) -> ECPoint:
    """Group addition.  Rejects points that do not lie on ``curve``."""
    curve.require(p1)
    curve.require(p2)
    return _add(p1, p2, curve)


def _add(p1: ECPoint, p2: ECPoint, curve: CurveParams) -> ECPoint:
    if p1.is_infinity:
        return p2
    if p2.is_infinity:
        return p1
    p = curve.p
    if p1.x == p2.x:
        if (p1.y + p2.y) % p == 0:
            return INFINITY
        m = (3 * p1.x * p1.x + curve.a) * pow(2 * p1.y, p - 2, p) % p
    else:
        m = (p2.y - p1.y) * pow(p2.x - p1.x, p - 2, p) % p
    x3 = (m * m - p1.x - p2.x) % p
    y3 = (m * (p1.x - x3) - p1.y) % p
    return ECPoint(x3, y3)


def _jac_double(x1: int, y1: int, z1: int, p: int, a: int) -> tuple[int, int, int]:
    if not y1 or not z1:
        return 0, 1, 0
    yy = y1 * y1 % p
    s = 4 * x1 * yy % p
    if a:
        z2 = z1 * z1 % p
        m = (3 * x1 * x1 + a * z2 * z2) % p
    else:
        m = 3 * x1 * x1 % p
    x3 = (m * m - 2 * s) % p
    y3 = (m * (s - x3) - 8 * yy * yy) % p
    z3 = 2 * y1 * z1 % p
    return x3, y3, z3


def _jac_add(
    x1: int, y1: int, z1: int, x2: int, y2: int, z2: int, p: int, a: int
) -> tuple[int, int, int]:
    if not z1:
        return x2, y2, z2
    if not z2:
        return x1, y1, z1
    z1z1 = z1 * z1 % p
    z2z2 = z2 * z2 % p
    u1 = x1 * z2z2 % p
    u2 = x2 * z1z1 % p
    s1 = y1 * z2 * z2z2 % p
    s2 = y2 * z1 * z1z1 % p
    h = (u2 - u1) % p
    r = (s2 - s1) % p
    if not h:
        if not r:
            return _jac_double(x1, y1, z1, p, a)
        return 0, 1, 0
    hh = h * h % p
    hhh = h * hh % p
    v = u1 * hh % p
    x3 = (r * r - hhh - 2 * v) % p
    y3 = (r * (v - x3) - s1 * hhh) % p
    z3 = h * z1 * z2 % p
    return x3, y3, z3


def scalar_mul(k: int, point: ECPoint, curve: CurveParams) -> ECPoint:
    """Double-and-add scalar multiplication; ``scalar_mul(0, P)`` is infinity."""
    if k < 0:
        raise ValueError("scalar must be nonnegative")
    curve.require(point)
    if k == 0 or point.is_infinity:
        return INFINITY
    p, a = curve.p, curve.a
    rx, ry, rz = 0, 1, 0
    px, py, pz = point.x, point.y, 1
    while k:
        if k & 1:
            rx, ry, rz = _jac_add(rx, ry, rz, px, py, pz, p, a)
        k >>= 1
        if k:
            px, py, pz = _jac_double(px, py, pz, p, a)
    if not rz:
        return INFINITY
    zinv = pow(rz, p - 2, p)
    zinv2 = zinv * zinv % p
    return ECPoint(rx * zinv2 % p, ry * zinv2 * zinv % p)


def serialize_point(point: ECPoint, curve: CurveParams) -> bytes:
    """Uncompressed form 0x04 || x || y, fixed-width big-endian coordinates."""
    if point.is_infinity:
        raise CurveError("cannot serialize the point at infinity")
    w = curve.coord_width
    return b"\x04" + point.x.to_bytes(w, "big") + point.y.to_bytes(w, "big")


def parse_point(data: bytes, curve: CurveParams) -> ECPoint:
    w = curve.coord_width
    if len(data) != 1 + 2 * w or data[0] != 0x04:
        raise CurveError("malformed uncompressed point")
    point = ECPoint(
        int.from_bytes(data[1 : 1 + w], "big"),
        int.from_bytes(data[1 + w :], "big"),
    )
    return curve.require(point)


@lru_cache(maxsize=None)
def enumerate_points(curve: CurveParams) -> tuple[ECPoint, ...]:
    """All points of a small curve, infinity first.  Test and audit aid."""
    if curve.p > 10_000:
        raise CurveError("enumeration is only supported for small curves")
    points = [INFINITY]
    for x in range(curve.p):
        rhs = (x * x * x + curve.a * x + curve.b) % curve.p
        for y in range(curve.p):
            if y * y % curve.p == rhs:
                points.append(ECPoint(x, y))
    return tuple(points)
