"""Single-file index container with a section table.

Layout: magic "WVIX", format version, mode, section count, then one
(4-byte tag, offset, size) entry per section, then the section payloads.
All integers are 64-bit little-endian. Loading a bundle answers every query
identically to the in-memory index it was saved from; unknown versions are
rejected.
"""

from __future__ import annotations

import io
import struct
from typing import BinaryIO, Optional

from .docindex import DocIndex
from .hierdoc import HierIndex
from .invindex import InvIndex

MAGIC = b"WVIX"
VERSION = 1

MODE_DOC = 1
MODE_HIER = 2
MODE_INV = 3
MODE_COMBINED = 4

MODE_NAMES = {
    "doc": MODE_DOC,
    "hier": MODE_HIER,
    "inv": MODE_INV,
    "combined": MODE_COMBINED,
}
MODE_LABELS = {v: k for k, v in MODE_NAMES.items()}

_TAG_DOC = b"DOCX"
_TAG_HIER = b"HIER"
_TAG_INV = b"INVX"


class IndexBundle:
    """A saved index: one or more section payloads under a mode flag."""

    def __init__(
        self,
        mode: int,
        doc: Optional[DocIndex] = None,
        hier: Optional[HierIndex] = None,
        inv: Optional[InvIndex] = None,
    ):
        if mode not in MODE_LABELS:
            raise ValueError(f"unknown bundle mode {mode}")
        self.mode = mode
        self.doc = doc
        self.hier = hier
        self.inv = inv

    @property
    def mode_name(self) -> str:
        return MODE_LABELS[self.mode]

    def _sections(self, store_text: bool):
        out = []
        if self.doc is not None:
            buf = io.BytesIO()
            self.doc.write(buf, store_text=store_text)
            out.append((_TAG_DOC, buf.getvalue()))
        if self.hier is not None:
            buf = io.BytesIO()
            self.hier.write(buf, store_text=store_text)
            out.append((_TAG_HIER, buf.getvalue()))
        if self.inv is not None:
            buf = io.BytesIO()
            self.inv.write(buf)
            out.append((_TAG_INV, buf.getvalue()))
        return out

    def write(self, out: BinaryIO, store_text: bool = True) -> None:
        sections = self._sections(store_text)
        out.write(MAGIC)
        out.write(struct.pack("<QQQ", VERSION, self.mode, len(sections)))
        offset = 4 + 24 + 20 * len(sections)
        for tag, payload in sections:
            out.write(tag + struct.pack("<QQ", offset, len(payload)))
            offset += len(payload)
        for _, payload in sections:
            out.write(payload)

    def save(self, path: str, store_text: bool = True) -> None:
        with open(path, "wb") as fh:
            self.write(fh, store_text=store_text)

    @classmethod
    def read(cls, inp: BinaryIO) -> "IndexBundle":
        if inp.read(4) != MAGIC:
            raise ValueError("not an index bundle (bad magic)")
        version, mode, count = struct.unpack("<QQQ", inp.read(24))
        if version != VERSION:
            raise ValueError(f"unsupported bundle version {version}")
        table = []
        for _ in range(count):
            tag = inp.read(4)
            offset, size = struct.unpack("<QQ", inp.read(16))
            table.append((tag, offset, size))
        bundle = cls(mode)
        for tag, offset, size in table:
            inp.seek(offset)
            section = io.BytesIO(inp.read(size))
            if tag == _TAG_DOC:
                bundle.doc = DocIndex.read(section)
            elif tag == _TAG_HIER:
                bundle.hier = HierIndex.read(section)
            elif tag == _TAG_INV:
                bundle.inv = InvIndex.read(section)
            else:
                raise ValueError(f"unknown section tag {tag!r}")
        return bundle

    @classmethod
    def load(cls, path: str) -> "IndexBundle":
        with open(path, "rb") as fh:
            return cls.read(fh)
