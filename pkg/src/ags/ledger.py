"""Append-only hash chain anchoring artifact digests.

A local, verifiable stand-in for a public anchoring backend: every block
commits to its predecessor's digest, so altering any anchored entry
invalidates every later block.  Blocks are persisted as canonical JSON
Lines and must re-serialize bit-exactly.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from ags.crypto.hashes import DIGEST_LEN, sha256

GENESIS_PREV = b"\x00" * DIGEST_LEN

ENTRY_KINDS = {"report": 1, "event": 2, "certificate": 3, "policy": 4}

TS_FORMAT = "%Y-%m-%dT%H:%M:%S.%fZ"


class LedgerError(ValueError):
    """Structurally invalid block or entry."""


class ChainFileError(LedgerError):
    """Chain file line that cannot be parsed; carries the bad height."""

    def __init__(self, height: int, reason: str):
        super().__init__(f"unreadable block at height {height}: {reason}")
        self.height = height


def now_ts() -> str:
    return datetime.now(timezone.utc).strftime(TS_FORMAT)


def _check_ts(ts: str) -> str:
    try:
        datetime.strptime(ts, TS_FORMAT)
    except ValueError as exc:
        raise LedgerError(f"bad timestamp {ts!r}: {exc}") from exc
    return ts


@dataclass(frozen=True)
class AnchorEntry:
    kind: str
    digest: bytes
    ref: str

    def __post_init__(self) -> None:
        if self.kind not in ENTRY_KINDS:
            raise LedgerError(f"unknown anchor kind: {self.kind!r}")
        if len(self.digest) != DIGEST_LEN:
            raise LedgerError("anchor digest must be 32 bytes")


@dataclass(frozen=True)
class AnchorBlock:
    height: int
    prev_digest: bytes
    timestamp: str
    entries: tuple[AnchorEntry, ...]
    block_digest: bytes


def _entries_bytes(entries: tuple[AnchorEntry, ...]) -> bytes:
    parts = [len(entries).to_bytes(4, "big")]
    for entry in entries:
        ref = entry.ref.encode()
        parts.append(bytes([ENTRY_KINDS[entry.kind]]))
        parts.append(entry.digest)
        parts.append(len(ref).to_bytes(2, "big"))
        parts.append(ref)
    return b"".join(parts)


def compute_block_digest(
    height: int, prev_digest: bytes, timestamp: str, entries: tuple[AnchorEntry, ...]
) -> bytes:
    return sha256(
        height.to_bytes(8, "big") + prev_digest + timestamp.encode() + _entries_bytes(entries)
    )


@dataclass
class Chain:
    """In-memory chain; mutation is append-only and single-writer."""

    blocks: list[AnchorBlock] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def tip_digest(self) -> bytes:
        return self.blocks[-1].block_digest if self.blocks else GENESIS_PREV

    def append_block(
        self, entries: list[AnchorEntry] | tuple[AnchorEntry, ...], timestamp: str | None = None
    ) -> AnchorBlock:
        """Append one block; empty entry lists are rejected."""
        entries = tuple(entries)
        if not entries:
            raise LedgerError("a block must anchor at least one entry")
        ts = _check_ts(timestamp) if timestamp is not None else now_ts()
        if self.blocks and ts < self.blocks[-1].timestamp:
            ts = self.blocks[-1].timestamp  # monotonized service clock
        height = len(self.blocks)
        prev = self.tip_digest
        block = AnchorBlock(
            height=height,
            prev_digest=prev,
            timestamp=ts,
            entries=entries,
            block_digest=compute_block_digest(height, prev, ts, entries),
        )
        self.blocks.append(block)
        return block

    def snapshot(self) -> tuple[AnchorBlock, ...]:
        return tuple(self.blocks)


def verify_chain(chain: Chain | list[AnchorBlock]) -> int | None:
    """None when every block invariant holds, else the first bad height."""
    blocks = chain.blocks if isinstance(chain, Chain) else list(chain)
    prev = GENESIS_PREV
    for i, block in enumerate(blocks):
        if block.height != i or block.prev_digest != prev:
            return i
        if not block.entries:
            return i
        try:
            recomputed = compute_block_digest(
                block.height, block.prev_digest, block.timestamp, block.entries
            )
        except (LedgerError, AttributeError, TypeError):
            return i
        if recomputed != block.block_digest:
            return i
        prev = block.block_digest
    return None


def find_entry(chain: Chain | list[AnchorBlock], digest: bytes) -> list[tuple[int, int]]:
    """All (height, index) positions anchoring ``digest``, ascending."""
    blocks = chain.blocks if isinstance(chain, Chain) else list(chain)
    hits = []
    for block in blocks:
        for index, entry in enumerate(block.entries):
            if entry.digest == digest:
                hits.append((block.height, index))
    return hits


# --- JSON Lines persistence ---------------------------------------------

def block_to_json(block: AnchorBlock) -> dict:
    return {
        "height": block.height,
        "prev_digest": block.prev_digest.hex(),
        "timestamp": block.timestamp,
        "entries": [
            {"kind": e.kind, "digest": e.digest.hex(), "ref": e.ref} for e in block.entries
        ],
        "block_digest": block.block_digest.hex(),
    }


def block_from_json(obj: dict) -> AnchorBlock:
    try:
        return AnchorBlock(
            height=int(obj["height"]),
            prev_digest=bytes.fromhex(obj["prev_digest"]),
            timestamp=obj["timestamp"],
            entries=tuple(
                AnchorEntry(e["kind"], bytes.fromhex(e["digest"]), e["ref"])
                for e in obj["entries"]
            ),
            block_digest=bytes.fromhex(obj["block_digest"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise LedgerError(f"malformed block record: {exc}") from exc


def block_line(block: AnchorBlock) -> bytes:
    return json.dumps(
        block_to_json(block), sort_keys=True, separators=(",", ":"), ensure_ascii=False
    ).encode() + b"\n"


def save_chain(chain: Chain, path: str | Path) -> None:
    with open(path, "wb") as fh:
        for block in chain.blocks:
            fh.write(block_line(block))


def append_chain_file(block: AnchorBlock, path: str | Path) -> None:
    with open(path, "ab") as fh:
        fh.write(block_line(block))


def load_chain(path: str | Path) -> Chain:
    """Parse a chain file; a corrupt line raises ChainFileError."""
    chain = Chain()
    data = Path(path).read_bytes()
    if not data:
        return chain
    complete = data.count(b"\n")
    for lineno, line in enumerate(data.split(b"\n")[:complete], start=0):
        try:
            block = block_from_json(json.loads(line))
        except (json.JSONDecodeError, LedgerError, UnicodeDecodeError) as exc:
            raise ChainFileError(lineno, str(exc)) from exc
        # bit-exact re-serialization contract: any byte-level deviation
        # (for example case-flipped hex) is corruption even if it parses
        if block_line(block) != line + b"\n":
            raise ChainFileError(lineno, "non-canonical block bytes")
        chain.blocks.append(block)
    if not data.endswith(b"\n"):
        raise ChainFileError(complete, "torn final line")
    return chain


def verify_chain_file(path: str | Path) -> int | None:
    """File-level verification: parse failures count as invalid heights."""
    try:
        chain = load_chain(path)
    except ChainFileError as exc:
        return exc.height
    return verify_chain(chain)
