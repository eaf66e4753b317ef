"""Benchmark the compiled hash kernels against the pure-Python fallback.

Run with ``python -m ags.bench``.  Hashing dominates anchoring, replay and
tamper verification, which is why those two loops live in the compiled
extension; signing is included for context (its cost is elliptic-curve
arithmetic, identical in both backends).
"""

from __future__ import annotations

import time

from ags.crypto import SECP256K1, PrivateKey, derive_public, sign, verify
from ags.crypto import _purehash
from ags.crypto.hashes import BACKEND, sha256

try:
    from ags.crypto import _corehash
except ImportError:
    _corehash = None


def _rate(fn, payload: bytes, seconds: float = 0.4) -> float:
    """Calls per second, measured over roughly ``seconds``."""
    fn(payload)  # warm up
    count = 0
    started = time.perf_counter()
    deadline = started + seconds
    while time.perf_counter() < deadline:
        fn(payload)
        count += 1
    return count / (time.perf_counter() - started)


def run(sizes=(64, 600, 8192)) -> list[dict]:
    rows = []
    backends = [("pure", _purehash)]
    if _corehash is not None:
        backends.append(("compiled", _corehash))
    for name, mod in backends:
        for size in sizes:
            payload = bytes(range(256)) * (size // 256 + 1)
            payload = payload[:size]
            for algo, fn in (("sha256", mod.sha256_bytes), ("ripemd160", mod.ripemd160_bytes)):
                rate = _rate(fn, payload)
                rows.append(
                    {
                        "backend": name,
                        "algo": algo,
                        "size": size,
                        "ops_per_s": rate,
                        "mb_per_s": rate * size / 1e6,
                    }
                )
    return rows


def run_signing() -> dict:
    priv = PrivateKey(0x1234567890ABCDEF, SECP256K1)
    pub = derive_public(priv)
    digest = sha256(b"benchmark message")
    sig = sign(priv, digest)
    sign_rate = _rate(lambda m: sign(priv, m), digest, seconds=1.0)
    verify_rate = _rate(lambda m: verify(pub, m, sig), digest, seconds=1.0)
    return {"sign_per_s": sign_rate, "verify_per_s": verify_rate}


def main() -> None:
    print(f"selected hash backend: {BACKEND}")
    print(f"{'backend':<10} {'algo':<10} {'size':>6} {'ops/s':>12} {'MB/s':>10}")
    rows = run()
    for row in rows:
        print(
            f"{row['backend']:<10} {row['algo']:<10} {row['size']:>6} "
            f"{row['ops_per_s']:>12.0f} {row['mb_per_s']:>10.2f}"
        )
    if _corehash is not None:
        for algo in ("sha256", "ripemd160"):
            pure = next(r for r in rows if r["backend"] == "pure" and r["algo"] == algo and r["size"] == 8192)
            fast = next(r for r in rows if r["backend"] == "compiled" and r["algo"] == algo and r["size"] == 8192)
            print(f"{algo}: compiled is {fast['mb_per_s'] / pure['mb_per_s']:.0f}x pure at 8 KiB")
    signing = run_signing()
    print(
        f"secp256k1 (either backend): {signing['sign_per_s']:.0f} sign/s, "
        f"{signing['verify_per_s']:.0f} verify/s"
    )


if __name__ == "__main__":
    main()
