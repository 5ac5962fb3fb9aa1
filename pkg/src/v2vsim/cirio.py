"""Serialization of CIR frame streams.

Raw format
    8-byte magic ``b"V2VCIR1\\0"`` followed by packed little-endian records
    ``t:f64 n:u32 p:u32 q:u32 re:f64 im:f64 tau:f64 power:f64``, one per
    (frame, path, MT element, MR element) in that nesting order.

CSV format
    Header ``t,n,p,q,re,im,tau_s,power``; one row per record, floats with 17
    significant digits.

``re``/``im`` are the unit-power path gain; the path weight is ``power``
(or its square root, see ``CirFrame.path_weights``).
"""
from __future__ import annotations

import contextlib
import os
from typing import BinaryIO, Iterable, List, Union

import numpy as np

from .chanmodel import CirFrame
from .errors import ExportError

MAGIC = b"V2VCIR1\0"
CSV_HEADER = "t,n,p,q,re,im,tau_s,power\n"
RECORD = np.dtype([
    ("t", "<f8"), ("n", "<u4"), ("p", "<u4"), ("q", "<u4"),
    ("re", "<f8"), ("im", "<f8"), ("tau", "<f8"), ("power", "<f8"),
])
FORMATS = ("raw", "csv")

Sink = Union[str, os.PathLike, BinaryIO]


def frame_records(frame: CirFrame) -> np.ndarray:
    n, p, q = frame.gains.shape
    rec = np.empty(n * p * q, dtype=RECORD)
    nn, pp, qq = np.meshgrid(np.arange(n), np.arange(p), np.arange(q), indexing="ij")
    rec["t"] = frame.t
    rec["n"] = nn.ravel()
    rec["p"] = pp.ravel()
    rec["q"] = qq.ravel()
    g = frame.gains.ravel()
    rec["re"] = g.real
    rec["im"] = g.imag
    rec["tau"] = np.repeat(frame.delays, p * q)
    rec["power"] = np.repeat(frame.powers, p * q)
    return rec


def _csv_lines(rec: np.ndarray) -> str:
    return "".join(
        f"{r['t']:.17g},{r['n']},{r['p']},{r['q']},{r['re']:.17g},{r['im']:.17g},"
        f"{r['tau']:.17g},{r['power']:.17g}\n"
        for r in rec
    )


@contextlib.contextmanager
def _open_sink(sink: Sink):
    if isinstance(sink, (str, os.PathLike)):
        with open(sink, "wb") as fh:
            yield fh
    else:
        yield sink


def export_cir(frames: Iterable[CirFrame], fmt: str, sink: Sink) -> int:
    """Write ``frames`` to ``sink`` (path or binary file); returns the frame count."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    index = -1
    with _open_sink(sink) as fh:
        try:
            fh.write(MAGIC if fmt == "raw" else CSV_HEADER.encode())
            for index, frame in enumerate(frames):
                rec = frame_records(frame)
                fh.write(rec.tobytes() if fmt == "raw" else _csv_lines(rec).encode())
            fh.flush()
        except OSError as exc:
            raise ExportError(f"writing CIR failed: {exc}", max(index, 0)) from exc
    return index + 1


def read_raw(source: Union[str, os.PathLike, BinaryIO]) -> List[CirFrame]:
    """Frames from a raw file."""
    if isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    if data[:len(MAGIC)] != MAGIC:
        raise ValueError("not a raw CIR file (bad magic)")
    body = data[len(MAGIC):]
    if len(body) % RECORD.itemsize:
        raise ValueError("truncated raw CIR file")
    rec = np.frombuffer(body, dtype=RECORD)
    if rec.size == 0:
        return []
    starts = np.flatnonzero((rec["n"] == 0) & (rec["p"] == 0) & (rec["q"] == 0))
    size = rec.size // starts.size
    if starts[0] != 0 or rec.size % starts.size or np.any(np.diff(starts) != size):
        raise ValueError("inconsistent frame layout in raw CIR file")
    n, p, q = (int(rec[k][:size].max()) + 1 for k in ("n", "p", "q"))
    frames = []
    for s in starts:
        r = rec[s:s + size]
        gains = (r["re"] + 1j * r["im"]).reshape(n, p, q)
        frames.append(CirFrame(float(r["t"][0]), gains, r["tau"][::p * q].copy(), r["power"][::p * q].copy()))
    return frames
