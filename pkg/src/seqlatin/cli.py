"""Command-line surface over the classification, pipelines, and oracle.

All machine output is a single JSON document on stdout (schema "1",
sorted keys, compact separators) so identical invocations produce
byte-identical bytes; human summaries go to stderr.  Exit codes: 0
success, 1 negative mathematical result, 2 usage or scale error, 3
internal failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .errors import (
    ConstructionFailed,
    DeskScaleExceeded,
    GroupFormatError,
    SeqLatinError,
)
from .graceful import graceful_with_first, walecki_graceful
from .groups import AbelianSpec, SdSpec, group_from_descriptor
from .latin import (
    completeness_report,
    is_directed_terrace,
    terrace_to_complete_square,
)
from .numtheory import classify_order
from .oracle import exhaustive_sequencings
from .pipelines import (
    NoGroupBasedCLS,
    TrivialOrder,
    sequence_cyclic,
    sequence_non3,
    sequence_order,
    sequence_theorem3,
)

SCHEMA = "1"
VERIFY_SQUARE_LIMIT = 512


def _parse_b(text: Optional[str]) -> Optional[AbelianSpec]:
    if not text:
        return None
    return AbelianSpec(tuple(int(tok) for tok in text.split(",")))


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="seqlatin",
        description="Sequencings of finite groups and complete Latin squares.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="sequenceability verdict for one order")
    p.add_argument("order", type=int)

    def group_flags(p, seeded=True):
        p.add_argument("--order", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--m", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--k", type=int)
        p.add_argument("--b", type=str, help="cofactor as comma-separated cyclic orders")
        p.add_argument("--nine", action="store_true")
        if seeded:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sequence", help="construct a sequencing certificate")
    group_flags(p)
    p.add_argument("--out", type=str)
    p.add_argument("--format", choices=["json"], default="json")

    p = sub.add_parser("latin", help="construct a complete Latin square")
    group_flags(p)
    p.add_argument("--out", type=str)
    p.add_argument("--format", choices=["json", "csv"])

    p = sub.add_parser("verify", help="re-check an emitted certificate file")
    p.add_argument("certificate", type=str, help="path to JSON, or - for stdin")

    p = sub.add_parser("graceful", help="graceful permutation of 1..k")
    p.add_argument("k", type=int)
    p.add_argument("first", type=int, nargs="?")

    p = sub.add_parser("search", help="brute-force terraces of a descriptor group")
    p.add_argument("--group", type=str, required=True, help="group descriptor JSON file")
    p.add_argument("--exhaustive", action="store_true")
    p.add_argument("--limit", type=int)
    p.add_argument("--jobs", type=int, default=1)
    return top


def _emit(doc, args, human: str) -> None:
    if isinstance(doc, str):
        text = doc
    else:
        text = json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w") as fh:
            fh.write(text)
        print(f"{human} -> {out}", file=sys.stderr)
    else:
        sys.stdout.write(text)
        print(human, file=sys.stderr)


def _pick_group(args):
    """Run the pipeline selected by the flag combination."""
    if args.order is not None:
        return sequence_order(args.order, seed=args.seed)
    if args.p is not None:
        if args.q is None:
            raise GroupFormatError("--p needs --q")
        b = _parse_b(args.b)
        if args.k is not None:
            return sequence_non3(args.p, args.k, args.q, b, seed=args.seed)
        return sequence_theorem3(args.p, args.q, b, nine=args.nine, seed=args.seed)
    if args.q is not None and args.m is not None:
        return sequence_cyclic(args.q, args.m)
    raise GroupFormatError("give --order, or --q with --m, or --p with --q")


def cmd_classify(args) -> int:
    cls = classify_order(args.order)
    doc = {"schema": SCHEMA, "command": "classify", "order": args.order}
    doc.update(cls.to_json())
    _emit(doc, args, f"order {args.order}: {cls.verdict}")
    return 0


def cmd_sequence(args) -> int:
    result = _pick_group(args)
    if isinstance(result, TrivialOrder):
        doc = {"schema": SCHEMA, "command": "sequence", "order": 1, "trivial": True}
        _emit(doc, args, "order 1: trivial group, empty sequencing")
        return 0
    if isinstance(result, NoGroupBasedCLS):
        doc = {
            "schema": SCHEMA,
            "command": "sequence",
            "order": result.order,
            "sequenceable": False,
            "verdict": result.verdict,
        }
        _emit(doc, args, f"order {result.order}: no sequenceable group ({result.verdict})")
        return 1
    doc = {
        "schema": SCHEMA,
        "command": "sequence",
        "certificate": result.to_json(),
    }
    pipe = result.provenance.get("pipeline", "?")
    _emit(doc, args, f"order {result.group.order}: sequenced via {pipe} pipeline")
    return 0


def cmd_latin(args) -> int:
    result = _pick_group(args)
    if isinstance(result, TrivialOrder):
        grid = [[0]]
        cert = None
        n = 1
    elif isinstance(result, NoGroupBasedCLS):
        doc = {
            "schema": SCHEMA,
            "command": "latin",
            "order": result.order,
            "sequenceable": False,
            "verdict": result.verdict,
        }
        _emit(doc, args, f"order {result.order}: no group-based complete square")
        return 1
    else:
        cert = result
        square = terrace_to_complete_square(cert.group, cert.terrace)
        grid = [list(row) for row in square.grid]
        n = square.n
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.out and args.out.endswith(".csv") else "json"
    if fmt == "csv":
        text = "\n".join(",".join(str(v) for v in row) for row in grid) + "\n"
        _emit(text, args, f"{n} x {n} complete square (csv)")
        return 0
    doc = {"schema": SCHEMA, "command": "latin", "n": n, "grid": grid}
    if cert is not None:
        doc["group"] = cert.to_json()["group"]
    _emit(doc, args, f"{n} x {n} complete square")
    return 0


def _decode_entries(group, rows):
    if isinstance(group, SdSpec):
        return [(int(r[0]), tuple(int(x) for x in r[1:])) for r in rows]
    if isinstance(group, AbelianSpec):
        return [tuple(int(x) for x in r) for r in rows]
    return [int(r[0]) if isinstance(r, list) else int(r) for r in rows]


def cmd_verify(args) -> int:
    if args.certificate == "-":
        raw = sys.stdin.read()
    else:
        with open(args.certificate) as fh:
            raw = fh.read()
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        print(f"not JSON: {exc}", file=sys.stderr)
        return 2
    cert = doc.get("certificate", doc)
    for key in ("group", "terrace", "sequencing"):
        if key not in cert:
            print(f"certificate lacks {key!r}", file=sys.stderr)
            return 2
    group = group_from_descriptor(cert["group"])
    terrace = _decode_entries(group, cert["terrace"])
    claimed = _decode_entries(group, cert["sequencing"])
    ok, quots = is_directed_terrace(group, terrace)
    seq_ok = ok and list(quots) == claimed
    checks = {"terrace": ok, "sequencing": seq_ok}
    if ok and group.order <= VERIFY_SQUARE_LIMIT:
        square = terrace_to_complete_square(group, terrace)
        checks["complete_square"] = completeness_report(square).is_complete
    valid = all(checks.values())
    out = {
        "schema": SCHEMA,
        "command": "verify",
        "valid": valid,
        "checks": checks,
        "order": group.order,
    }
    _emit(out, args, f"certificate {'valid' if valid else 'INVALID'}: {checks}")
    return 0 if valid else 1


def cmd_graceful(args) -> int:
    if args.first is None:
        perm = walecki_graceful(args.k)
        how = "zigzag"
    else:
        perm = graceful_with_first(args.k, args.first)
        how = "prescribed-first"
    doc = {
        "schema": SCHEMA,
        "command": "graceful",
        "k": args.k,
        "construction": how,
        "permutation": list(perm),
    }
    _emit(doc, args, f"graceful permutation of 1..{args.k} ({how})")
    return 0


def cmd_search(args) -> int:
    with open(args.group) as fh:
        descriptor = json.load(fh)
    group = group_from_descriptor(descriptor)
    limit = args.limit if args.exhaustive else (args.limit or 1)
    res = exhaustive_sequencings(group, limit=limit, jobs=args.jobs)
    doc = {"schema": SCHEMA, "command": "search", "order": group.order}
    doc.update(res.to_json())
    _emit(
        doc,
        args,
        f"order {group.order}: {res.count} identity-anchored terrace(s)"
        f"{' (exhaustive)' if res.exhausted else ''}",
    )
    return 0 if res.count > 0 else 1


COMMANDS = {
    "classify": cmd_classify,
    "sequence": cmd_sequence,
    "latin": cmd_latin,
    "verify": cmd_verify,
    "graceful": cmd_graceful,
    "search": cmd_search,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args)
    except (GroupFormatError, DeskScaleExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConstructionFailed as exc:
        print(f"internal failure: {exc}", file=sys.stderr)
        return 3
    except SeqLatinError as exc:
        print(f"no result: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - last resort
        print(f"internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
