"""On-disk formats: the packed bit file, the '0'/'1' text form, and JSON reports.

Bit file layout::

    b"BSEQ1" | 0x01 | length in bits (u64, little-endian) | payload

The payload is MSB-first within each byte, ceil(length / 8) bytes long, with
the unused tail of the last byte set to zero.  Readers detect the format by
the magic, so the two forms are interchangeable as inputs.
"""

from __future__ import annotations

import csv
import hashlib
import json
import struct
from importlib import resources
from pathlib import Path
from typing import Iterable

from . import __version__
from .bitseq import BitString
from .errors import RejectedInputError
from .estimators import ComplexityReport

__all__ = [
    "MAGIC",
    "VERSION",
    "CSV_COLUMNS",
    "encode_bitfile",
    "decode_bitfile",
    "read_bits",
    "write_bits",
    "payload_sha256",
    "build_report",
    "report_schema",
    "write_csv",
]

MAGIC = b"BSEQ1"
VERSION = 1
_HEADER = struct.Struct("<5sBQ")
CSV_COLUMNS = ("scenario", "subject", "quantity", "value")


def encode_bitfile(bits: BitString) -> bytes:
    return _HEADER.pack(MAGIC, VERSION, len(bits)) + bits.packed


def decode_bitfile(data: bytes) -> BitString:
    if len(data) < _HEADER.size:
        raise RejectedInputError(f"bit file too short for its {_HEADER.size}-byte header")
    magic, version, length = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise RejectedInputError(f"bad magic {magic!r}")
    if version != VERSION:
        raise RejectedInputError(f"unsupported bit file version {version}")
    payload = data[_HEADER.size:]
    need = (length + 7) // 8
    if len(payload) != need:
        raise RejectedInputError(f"payload has {len(payload)} bytes, header promises {need}")
    spare = need * 8 - length
    if spare and payload[-1] & ((1 << spare) - 1):
        raise RejectedInputError("padding bits of the last payload byte are not zero")
    return BitString(payload, length)


def read_bits(path: str | Path) -> BitString:
    """Load a bit file or a text file, whichever the content turns out to be."""
    data = Path(path).read_bytes()
    if data.startswith(MAGIC):
        return decode_bitfile(data)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise RejectedInputError(f"{path}: neither a bit file nor a 0/1 text file") from exc
    return BitString.from_str(text)


def write_bits(path: str | Path, bits: BitString, fmt: str = "bits") -> None:
    if fmt == "bits":
        Path(path).write_bytes(encode_bitfile(bits))
    elif fmt == "text":
        Path(path).write_text(str(bits) + "\n", encoding="ascii")
    else:
        raise RejectedInputError(f"unknown format {fmt!r}; expected 'bits' or 'text'")


def payload_sha256(bits: BitString) -> str:
    return hashlib.sha256(bits.packed).hexdigest()


def build_report(report: ComplexityReport, bits: BitString, source: str, notes: Iterable[str] = ()) -> dict:
    return {
        "tool_version": __version__,
        "input": {"source": source, "n": len(bits), "sha256": payload_sha256(bits)},
        "estimators": report.to_dict(),
        "notes": list(notes),
    }


def report_schema() -> dict:
    text = resources.files(__package__).joinpath("report.schema.json").read_text()
    return json.loads(text)


def write_csv(path: str | Path, rows: Iterable[tuple]) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        writer.writerows(rows)
