"""Biased bit sources and flip accounting.

A source hands out flips one at a time (``next``) or in blocks (``read``).
Flips are encoded as integers, 1 for Head and 0 for Tail, which is also
their on-disk bit value.

Bit files carry an 8-byte little-endian bit count, followed by
``ceil(count / 8)`` payload bytes, MSB-first within each byte.
"""

from __future__ import annotations

import enum
import os
import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Union

import numpy as np

HEADER = struct.Struct("<Q")
_MAX_BLOCK = 1 << 16


class Flip(enum.IntEnum):
    TAIL = 0
    HEAD = 1

    def __str__(self) -> str:
        return "H" if self else "T"


class SourceExhausted(Exception):
    """The source ran out of flips.

    ``partial`` is the number of flips delivered by the failing ``read``
    before the end of the stream was hit.
    """

    def __init__(self, message: str = "bit source exhausted", partial: int = 0):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class BiasParams:
    """Head probability ``a`` of a biased coin; ``b = 1 - a``."""

    a: Union[float, Fraction]
    b: Union[float, Fraction] = field(init=False)

    def __post_init__(self) -> None:
        a = self.a
        if isinstance(a, int) and not isinstance(a, bool):
            a = Fraction(a)
        if not 0 < a < 1:
            raise ValueError(f"bias must lie strictly inside (0, 1), got {self.a!r}")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", 1 - a)


class BitSource:
    """Supplier of flips that a consumer may treat as i.i.d.

    Subclasses implement ``next``; ``read`` may be overridden for speed.
    A source instance must only be consumed by one sampler.
    """

    def next(self) -> Flip:
        raise NotImplementedError

    def read(self, k: int) -> np.ndarray:
        """Return the next ``k`` flips as a uint8 array of 0/1."""
        out = np.empty(k, dtype=np.uint8)
        for i in range(k):
            try:
                out[i] = self.next()
            except SourceExhausted as exc:
                raise SourceExhausted(str(exc), partial=i) from None
        return out

    def __iter__(self):
        while True:
            try:
                yield self.next()
            except SourceExhausted:
                return


class _BufferedSource(BitSource):
    """Serves flips out of a refillable uint8 buffer."""

    def __init__(self) -> None:
        self._buf = np.empty(0, dtype=np.uint8)
        self._pos = 0

    def _refill(self) -> np.ndarray | None:
        raise NotImplementedError

    def next(self) -> Flip:
        if self._pos >= len(self._buf):
            self._load()
        bit = self._buf[self._pos]
        self._pos += 1
        return Flip(int(bit))

    def _load(self) -> None:
        fresh = self._refill()
        if fresh is None or len(fresh) == 0:
            raise SourceExhausted()
        self._buf = fresh
        self._pos = 0

    def read(self, k: int) -> np.ndarray:
        end = self._pos + k
        if end <= len(self._buf):
            out = self._buf[self._pos:end]
            self._pos = end
            return out
        parts = []
        got = 0
        while got < k:
            if self._pos >= len(self._buf):
                try:
                    self._load()
                except SourceExhausted:
                    raise SourceExhausted(partial=got) from None
            take = min(k - got, len(self._buf) - self._pos)
            parts.append(self._buf[self._pos:self._pos + take])
            self._pos += take
            got += take
        return np.concatenate(parts)


class SimulatedSource(_BufferedSource):
    """Seeded biased coin.

    Each flip consumes one double from a Philox stream (counter based, so the
    sequence depends only on the seed) and is a Head iff ``u < a``.
    """

    def __init__(self, params: BiasParams, seed: int):
        super().__init__()
        self.params = params
        self.seed = seed
        self._threshold = float(params.a)
        self._gen = np.random.Generator(np.random.Philox(seed))
        self._block = 256

    def _refill(self) -> np.ndarray:
        # block size only affects speed; the double stream is the same either way
        u = self._gen.random(self._block)
        self._block = min(2 * self._block, _MAX_BLOCK)
        return (u < self._threshold).astype(np.uint8)


class FileSource(_BufferedSource):
    """Flips read from a bit file, MSB-first, 1 = Head.

    With ``headered=False`` the file is a raw dump and every bit counts.
    """

    def __init__(self, path: Union[str, os.PathLike], headered: bool = True):
        super().__init__()
        self.path = path
        with open(path, "rb") as fh:
            data = fh.read()
        if not headered:
            payload, count = data, 8 * len(data)
        elif not data:
            # an empty file is an empty stream
            payload, count = b"", 0
        else:
            if len(data) < HEADER.size:
                raise ValueError(f"{path}: truncated bit-count header")
            (count,) = HEADER.unpack_from(data)
            payload = data[HEADER.size:]
            if count > 8 * len(payload):
                raise ValueError(
                    f"{path}: header declares {count} bits, payload holds {8 * len(payload)}"
                )
        bits = np.unpackbits(np.frombuffer(payload, dtype=np.uint8), bitorder="big")
        self.bit_count = int(count)
        self._pending = bits[:count]

    def _refill(self) -> np.ndarray | None:
        fresh, self._pending = self._pending, None
        return fresh


class CountingSource(BitSource):
    """Wrapper that counts successfully delivered flips."""

    def __init__(self, inner: BitSource):
        self.inner = inner
        self.flips_consumed = 0

    def next(self) -> Flip:
        flip = self.inner.next()
        self.flips_consumed += 1
        return flip

    def read(self, k: int) -> np.ndarray:
        try:
            out = self.inner.read(k)
        except SourceExhausted as exc:
            self.flips_consumed += exc.partial
            raise
        self.flips_consumed += k
        return out


class ListSource(BitSource):
    """Finite source over an explicit flip sequence (handy for scripted tests)."""

    def __init__(self, flips: Iterable[int] | str):
        self._flips = list(_coerce(flips))
        self._pos = 0

    def next(self) -> Flip:
        if self._pos >= len(self._flips):
            raise SourceExhausted()
        flip = self._flips[self._pos]
        self._pos += 1
        return flip


def _coerce(flips: Iterable[int] | str):
    for f in flips:
        if isinstance(f, str):
            if f in "Hh1":
                yield Flip.HEAD
            elif f in "Tt0":
                yield Flip.TAIL
            elif f in ", ":
                continue
            else:
                raise ValueError(f"not a flip symbol: {f!r}")
        else:
            yield Flip(int(f))


def simulated_source(params: BiasParams | float | Fraction, seed: int) -> SimulatedSource:
    if not isinstance(params, BiasParams):
        params = BiasParams(params)
    return SimulatedSource(params, seed)


def file_source(path, bit_order: str = "msb", headered: bool = True) -> FileSource:
    if bit_order.lower() not in ("msb", "msbfirst", "msb_first"):
        raise ValueError(f"unsupported bit order {bit_order!r}; only MSB-first is defined")
    return FileSource(path, headered=headered)


def with_counter(src: BitSource) -> CountingSource:
    return CountingSource(src)


def write_bit_file(path, flips: Iterable[int] | str) -> int:
    """Write ``flips`` in the headered bit-file format; returns the bit count."""
    bits = np.fromiter((int(f) for f in _coerce(flips)), dtype=np.uint8)
    with open(path, "wb") as fh:
        fh.write(HEADER.pack(len(bits)))
        fh.write(np.packbits(bits, bitorder="big").tobytes())
    return len(bits)
