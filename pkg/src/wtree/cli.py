"""Command-line front end: corpus ingestion, index build/save/load, queries.

``wtree build`` ingests a corpus (directory of files, a record-separated
file, or a minimal-XML file) and writes a single-file index bundle.
``wtree query`` loads a bundle and runs one subcommand per invocation,
printing tab-separated records (or JSON lines with --json) on stdout.
Document ids are 1-based; empty results exit 0. Node-visit counters go to
stderr when --stats is given or WVX_STATS=1 is set, and never affect the
results themselves.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .bundle import MODE_COMBINED, MODE_DOC, MODE_HIER, MODE_INV, MODE_NAMES, IndexBundle
from .docindex import DocIndex, SentinelByteError
from .hierdoc import HierIndex, XmlError
from .invindex import InvIndex, TermSpec
from .rangeops import rint, rnv, rqq

EXIT_USAGE = 2
EXIT_UNREADABLE = 3
EXIT_SENTINEL = 4
EXIT_BAD_XML = 5

_DOC_OPS = {"dlist", "dfreq", "dint"}
_HIER_OPS = {"hdlist", "hdint", "hdfreq"}
_INV_OPS = {
    "ft-get",
    "ft-seg",
    "lt-seg",
    "intersect",
    "stem-intersect",
    "vocab-of",
    "contains",
    "persin-prefix",
}
_SEQ_OPS = {"rqq", "rnv", "rint", "count", "report"}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wtree",
        description="Wavelet-tree indexes: document retrieval, hierarchical "
        "units, and a dual-mode inverted index.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="build an index bundle from a corpus")
    b.add_argument("--mode", required=True, choices=sorted(MODE_NAMES))
    b.add_argument("--input", required=True, help="corpus directory or file")
    b.add_argument("--output", required=True, help="bundle file to write")
    b.add_argument(
        "--sep",
        default="0x1e",
        help="record separator byte for single-file corpora (default 0x1e)",
    )
    b.add_argument(
        "--store-text",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="embed the raw text in the bundle (needed for pattern queries)",
    )
    b.add_argument("--stem-map", default=None, help="file of 'variant stem' lines")

    q = sub.add_parser("query", help="query a saved index bundle")
    q.add_argument("index", help="bundle file")
    q.add_argument("op", help="subcommand, e.g. dlist, rqq, intersect")
    q.add_argument("params", nargs="*", help="subcommand arguments")
    q.add_argument("--range", dest="range_", default=None, metavar="DMIN:DMAX")
    q.add_argument("--threshold", type=int, default=None)
    q.add_argument("--json", action="store_true")
    q.add_argument("--stats", action="store_true")
    return parser


# --- build ------------------------------------------------------------------


def _read_corpus(path: str, sep: int) -> List[bytes]:
    p = Path(path)
    if p.is_dir():
        files = sorted(f for f in p.iterdir() if f.is_file())
        if not files:
            raise OSError(f"corpus directory {path} holds no files")
        return [f.read_bytes() for f in files]
    data = p.read_bytes()
    sep_b = bytes([sep])
    if data.endswith(sep_b):
        data = data[:-1]
    return data.split(sep_b)


def _read_stem_map(path: Optional[str]) -> Optional[dict]:
    if path is None:
        return None
    mapping = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise OSError(f"stem map line must be 'variant stem': {line!r}")
        mapping[parts[0]] = parts[1]
    return mapping


def _report_bits(pairs, out) -> None:
    for key, value in pairs:
        print(f"{key}\t{value}", file=out)


def _cmd_build(args: argparse.Namespace, out) -> int:
    mode = MODE_NAMES[args.mode]
    try:
        sep = int(args.sep, 0)
    except ValueError:
        raise _Usage(f"--sep expects a byte value, got {args.sep!r}") from None
    if not 0 <= sep <= 255:
        raise _Usage(f"separator byte {args.sep} out of range 0..255")
    try:
        stem_map = _read_stem_map(args.stem_map)
        if mode == MODE_HIER:
            data = Path(args.input).read_bytes()
            hier = HierIndex.from_xml(data)
            bundle = IndexBundle(mode, hier=hier)
        else:
            docs = _read_corpus(args.input, sep)
            doc = inv = None
            if mode in (MODE_DOC, MODE_COMBINED):
                doc = DocIndex(docs)
            if mode in (MODE_INV, MODE_COMBINED):
                texts = [d.decode("utf-8", errors="replace") for d in docs]
                inv = InvIndex.from_texts(texts, stem_map=stem_map)
            bundle = IndexBundle(mode, doc=doc, inv=inv)
    except XmlError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_XML
    except SentinelByteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SENTINEL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    bundle.save(args.output, store_text=args.store_text)
    rows = [("mode", args.mode)]
    if bundle.doc is not None:
        d = bundle.doc
        rows += [
            ("doc.m", d.m),
            ("doc.n", d.n),
            ("doc.u", d.da.distinct),
        ]
        rows += [(f"doc.bits.{k}", v) for k, v in sorted(d.bit_report.items())]
    if bundle.hier is not None:
        h = bundle.hier
        rows += [
            ("hier.nodes", h.ptree.n2 // 2),
            ("hier.tau", h.tau),
            ("hier.leaves", h.m),
            ("hier.doc.n", h.doc.n),
            ("hier.doc.u", h.doc.da.distinct),
        ]
        rows += [(f"hier.bits.{k}", v) for k, v in sorted(h.bit_report.items())]
    if bundle.inv is not None:
        ix = bundle.inv
        rows += [
            ("inv.m", ix.m),
            ("inv.nu", ix.nu),
            ("inv.n", ix.n),
            ("inv.N", ix.N),
            ("inv.u", ix.postings.distinct),
        ]
        rows += [(f"inv.bits.{k}", v) for k, v in sorted(ix.bit_report.items())]
    _report_bits(rows, out)
    return 0


# --- query ---------------------------------------------------------------------


class _Usage(Exception):
    pass


def _parse_range(spec: Optional[str]):
    if spec is None:
        return None, None
    try:
        lo, hi = spec.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise _Usage(f"--range expects DMIN:DMAX, got {spec!r}") from exc


def _parse_interval(spec: str):
    try:
        lo, hi = spec.split(":")
        return int(lo), int(hi)
    except ValueError as exc:
        raise _Usage(f"expected I:J interval, got {spec!r}") from exc


def _need(params: Sequence[str], count: int, op: str, at_least: bool = False):
    if at_least:
        if len(params) < count:
            raise _Usage(f"{op} needs at least {count} argument(s)")
    elif len(params) != count:
        raise _Usage(f"{op} needs exactly {count} argument(s)")


def _resolve_terms(ix: InvIndex, specs: Sequence[str]) -> Optional[List[TermSpec]]:
    terms: List[TermSpec] = []
    for spec in specs:
        if spec.endswith("*"):
            rng = ix.stem_range(spec[:-1])
            if rng is None:
                print(f"warning: no terms match stem {spec!r}", file=sys.stderr)
                return None
            terms.append(rng)
        else:
            t = ix.term_id(spec)
            if t is None:
                print(f"warning: unknown term {spec!r}", file=sys.stderr)
                return None
            terms.append(t)
    return terms


def _emit(rows, names, as_json, out) -> None:
    for row in rows:
        if as_json:
            obj = dict(zip(names, row))
            print(json.dumps(obj, separators=(",", ":")), file=out)
        else:
            flat = []
            for v in row:
                if isinstance(v, (list, tuple)):
                    flat.extend(v)
                else:
                    flat.append(v)
            print("\t".join(str(v) for v in flat), file=out)


def _cmd_query(args: argparse.Namespace, out) -> int:
    try:
        bundle = IndexBundle.load(args.index)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    op = args.op
    params = args.params
    dmin, dmax = _parse_range(args.range_)
    thr = args.threshold
    doc = bundle.doc if bundle.doc is not None else (
        bundle.hier.doc if bundle.hier is not None else None
    )
    if op in _SEQ_OPS:
        seq_tree = bundle.inv.postings if bundle.mode == MODE_INV else (
            doc.da if doc is not None else None
        )
        if seq_tree is None:
            raise _Usage(f"{op} needs a sequence-bearing bundle")
    if op in _DOC_OPS and doc is None:
        raise _Usage(f"{op} needs a doc, hier, or combined bundle")
    if op in _HIER_OPS and bundle.hier is None:
        raise _Usage(f"{op} needs a hier bundle")
    if op in _INV_OPS and bundle.inv is None:
        raise _Usage(f"{op} needs an inv or combined bundle")

    rows: List[tuple] = []
    names: List[str] = []

    if op == "dlist":
        _need(params, 1, op)
        names = ["doc", "tf"]
        rows = list(doc.dlist(params[0].encode(), dmin, dmax))
    elif op == "dfreq":
        _need(params, 2, op)
        names = ["count"]
        rows = [(doc.dfreq(params[0].encode(), int(params[1])),)]
    elif op == "dint":
        _need(params, 1, op, at_least=True)
        names = ["doc", "tfs"]
        rows = list(
            doc.dint([p.encode() for p in params], t=thr, dmin=dmin, dmax=dmax)
        )
    elif op == "hdlist":
        _need(params, 2, op)
        hier = bundle.hier
        t = hier.tag_id(params[0])
        if t is None:
            print(f"warning: unknown tag {params[0]!r}", file=sys.stderr)
        else:
            names = ["handle", "dl", "dr", "freq"]
            for p, f in hier.hdlist(t, params[1].encode(), dmin, dmax, with_freq=True):
                dl, dr = hier.leaf_range(p)
                rows.append((p, dl, dr, f))
    elif op == "hdint":
        _need(params, 3, op)
        hier = bundle.hier
        t = hier.tag_id(params[0])
        if t is None:
            print(f"warning: unknown tag {params[0]!r}", file=sys.stderr)
        else:
            names = ["handle", "f1", "f2"]
            rows = list(
                hier.hdint(t, params[1].encode(), params[2].encode(), dmin, dmax)
            )
    elif op == "hdfreq":
        _need(params, 2, op)
        names = ["count"]
        rows = [(bundle.hier.hdfreq(params[0].encode(), int(params[1])),)]
    elif op == "rqq":
        _need(params, 3, op)
        names = ["symbol", "freq"]
        rows = [rqq(seq_tree, int(params[0]), int(params[1]), int(params[2]))]
    elif op == "rnv":
        _need(params, 3, op)
        names = ["symbol", "freq", "rank"]
        got = rnv(seq_tree, int(params[0]), int(params[1]), int(params[2]))
        rows = [] if got is None else [got]
    elif op == "rint":
        _need(params, 2, op, at_least=True)
        names = ["symbol", "freqs"]
        ranges = [_parse_interval(p) for p in params]
        rng = (dmin, dmax) if dmin is not None else None
        rows = list(rint(seq_tree, ranges, t=thr, rng=rng))
    elif op == "count":
        _need(params, 4, op)
        names = ["count"]
        xs, xe, ys, ye = (int(p) for p in params)
        rows = [(seq_tree.count(xs, xe, ys, ye),)]
    elif op == "report":
        if len(params) not in (2, 4):
            raise _Usage("report needs XS XE [YS YE]")
        names = ["symbol", "freq"]
        xs, xe = int(params[0]), int(params[1])
        if len(params) == 4:
            ys, ye = int(params[2]), int(params[3])
        else:
            ys, ye = 1, seq_tree.sigma
        rows = list(seq_tree.report(xs, xe, ys, ye))
    elif op in ("ft-get", "ft-seg", "lt-seg", "contains", "persin-prefix"):
        _need(params, 1, op, at_least=True)
        ix = bundle.inv
        terms = _resolve_terms(ix, params[:1])
        if terms is not None:
            term = terms[0]
            if op == "ft-get":
                _need(params, 2, op)
                names = ["doc"]
                rows = [(ix.ft_get(term, int(params[1])),)]
            elif op == "ft-seg":
                _need(params, 3, op)
                names = ["doc"]
                rows = [(d,) for d in ix.ft_segment(term, int(params[1]), int(params[2]))]
            elif op == "lt-seg":
                _need(params, 3, op)
                if isinstance(term, tuple):
                    raise _Usage("lt-seg takes a single term, not a stem")
                names = ["doc", "tf"]
                rows = list(
                    ix.lt_segment(term, int(params[1]), int(params[2]), with_tf=True)
                )
            elif op == "contains":
                _need(params, 2, op)
                if isinstance(term, tuple):
                    raise _Usage("contains takes a single term, not a stem")
                names = ["present", "offset"]
                present, off = ix.contains(term, int(params[1]))
                rows = [(1, off) if present else (0,)]
            else:  # persin-prefix
                _need(params, 2, op)
                if isinstance(term, tuple):
                    raise _Usage("persin-prefix takes a single term, not a stem")
                names = ["prefix"]
                rows = [(ix.persin_prefix(term, int(params[1])),)]
    elif op in ("intersect", "stem-intersect"):
        _need(params, 2, op, at_least=True)
        if op == "stem-intersect" and not any(p.endswith("*") for p in params):
            raise _Usage("stem-intersect needs at least one 'prefix*' argument")
        ix = bundle.inv
        terms = _resolve_terms(ix, params)
        if terms is not None:
            names = ["doc", "counts"]
            rows = list(ix.intersect(terms, threshold=thr, dmin=dmin, dmax=dmax))
    elif op == "vocab-of":
        _need(params, 1, op)
        ix = bundle.inv
        names = ["term", "word"]
        rows = [(t, ix.term_string(t)) for t in ix.local_vocab(int(params[0]))]
    else:
        raise _Usage(f"unknown subcommand {op!r}")

    _emit(rows, names, args.json, out)

    if args.stats or os.environ.get("WVX_STATS") == "1":
        visits = 0
        if doc is not None:
            visits += doc.da.stats.node_visits
        if bundle.hier is not None:
            visits += bundle.hier.tag.stats.node_visits
        if bundle.inv is not None:
            visits += bundle.inv.postings.stats.node_visits
        print(f"stats.node_visits\t{visits}", file=sys.stderr)
    return 0


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "build":
            return _cmd_build(args, sys.stdout)
        return _cmd_query(args, sys.stdout)
    except _Usage as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_UNREADABLE
    except ValueError as exc:  # malformed numeric arguments, bad ranges
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
