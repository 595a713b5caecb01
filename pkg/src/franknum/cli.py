"""Batch driver: classify graphs, certify colourable ones by flows, run the
heuristic and then the exact search on snarks.

Records go to stdout as TSV, the per-order summary to stderr or --summary.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Optional

from . import exact, flows, heuristic, oracle
from .errors import (
    BudgetExceeded,
    CapExceeded,
    FrankError,
    GraphFormatError,
    InternalContradiction,
    PreconditionViolated,
)
from .graphio import classify, parse_graph6
from .orientation import FrankCertificate, deletable_edges, first_uncovered_edge

log = logging.getLogger("franknum")

MODES = ("auto", "heuristic", "exact", "oracle", "fn4", "fn2flow")
YES, NO, UNKNOWN, SKIPPED = "fn2-yes", "fn2-no", "inconclusive", "skipped-precondition"
FN4 = "fn4-certified"
ORACLE_MAX_EDGES = 18  # escalation limit when the exact budget runs out


@dataclass
class Options:
    mode: str = "auto"
    snarks_only: bool = False
    require_cyclic4: bool = False
    certificates: Optional[str] = None
    budget_nodes: Optional[int] = None
    timeout_ms: Optional[int] = None
    seed_climbs: int = 32


@dataclass
class VerdictRecord:
    index: int
    n: int = 0
    graph6: str = ""
    flags: dict = field(default_factory=dict)
    verdict: str = SKIPPED
    method: str = ""
    millis: int = 0
    certificate_path: str = ""
    note: str = ""
    heuristic_passed: Optional[bool] = None
    heuristic_millis: int = 0
    exact_millis: int = 0
    filtered: bool = False
    error: bool = False

    def tsv(self) -> str:
        return "\t".join(str(x) for x in (self.index, self.n, self.verdict, self.method or "-",
                                          self.millis, self.certificate_path or "-"))


def _ms(t0: float) -> int:
    return int(round((time.perf_counter() - t0) * 1000))


def _certify(rec: VerdictRecord, g, cert: FrankCertificate, opts: Options) -> None:
    bad = first_uncovered_edge(g, cert)
    if bad is not None:
        raise InternalContradiction(f"{cert.provenance} certificate leaves edge {bad} uncovered")
    if opts.certificates:
        path = os.path.join(opts.certificates, f"{rec.index}.json")
        with open(path, "w") as fh:
            fh.write(cert.to_json(g))
        rec.certificate_path = path


def _run_heuristic(rec, g, opts) -> bool:
    t0 = time.perf_counter()
    w = heuristic.heuristic_frank2(g, check=False)
    if w is not None:
        _certify(rec, g, heuristic.certificate_from_witness(g, w), opts)
        rec.verdict, rec.method = YES, w.kind
    rec.heuristic_passed = w is not None
    rec.heuristic_millis = _ms(t0)
    return w is not None


def _run_oracle(rec, g, opts) -> None:
    if g.m > oracle.MAX_EDGES:
        raise CapExceeded(f"{g.m} edges exceeds the oracle cap")
    pair = oracle.pair_certificate(g)
    rec.method = "oracle"
    if pair is None:
        rec.verdict = NO
        return
    cert = FrankCertificate(list(pair), [deletable_edges(g, o) for o in pair], "oracle")
    _certify(rec, g, cert, opts)
    rec.verdict = YES


def _run_exact(rec, g, opts, escalate: bool) -> None:
    t0 = time.perf_counter()
    try:
        res = exact.exact_frank2(g, budget_nodes=opts.budget_nodes, timeout_ms=opts.timeout_ms,
                                 seed_climbs=opts.seed_climbs)
    except BudgetExceeded as exc:
        rec.exact_millis = _ms(t0)
        rec.note = str(exc)
        if escalate and g.m <= ORACLE_MAX_EDGES:
            _run_oracle(rec, g, opts)
        else:
            rec.verdict, rec.method = UNKNOWN, "exact"
        return
    rec.exact_millis = _ms(t0)
    rec.method = "exact"
    if res.frank2:
        _certify(rec, g, res.certificate, opts)
        rec.verdict = YES
    else:
        rec.verdict = NO


def process_line(index: int, line: str, opts: Options) -> VerdictRecord:
    rec = VerdictRecord(index)
    t0 = time.perf_counter()
    try:
        g = parse_graph6(line)
    except GraphFormatError as exc:
        rec.note = f"parse error: {exc}"
        return rec
    rec.n, rec.graph6 = g.n, line.strip()
    try:
        cls = classify(g)
        rec.flags = cls.as_dict()
        snark = cls.is_cubic and cls.is_3_edge_colourable is False
        if opts.snarks_only and not snark:
            rec.filtered = True
            rec.note = "not a snark"
            return rec
        _dispatch(rec, g, cls, opts)
    except PreconditionViolated as exc:
        rec.verdict, rec.note = SKIPPED, str(exc)
    except CapExceeded as exc:
        rec.verdict, rec.note = SKIPPED, str(exc)
    except InternalContradiction as exc:
        rec.verdict, rec.note, rec.error = UNKNOWN, f"internal error: {exc}", True
    rec.millis = _ms(t0)
    return rec


def _dispatch(rec, g, cls, opts: Options) -> None:
    mode = opts.mode
    if not (cls.is_cubic and cls.is_3_edge_connected):
        rec.note = "not a 3-edge-connected cubic graph"
        return
    if mode == "fn4":
        gf = flows.find_z2z3_flow(g)
        if gf is None:
            raise InternalContradiction("no nowhere-zero Z2xZ3-flow found")
        _certify(rec, g, flows.four_orientations(g, gf), opts)
        rec.verdict, rec.method = FN4, "flow-6flow"
        return
    if mode == "fn2flow" or (mode == "auto" and cls.is_3_edge_colourable):
        gf = flows.find_z2z2_flow(g)
        if gf is None:
            rec.note = "not 3-edge-colourable"
            return
        _certify(rec, g, flows.orientations_from_4flow(g, gf), opts)
        rec.verdict, rec.method = YES, "flow-4flow"
        return
    if mode == "heuristic":
        if not cls.is_cyclically_4_edge_connected:
            rec.note = "not cyclically 4-edge-connected"
            rec.error = not opts.require_cyclic4
            return
        if not _run_heuristic(rec, g, opts):
            rec.verdict, rec.method = UNKNOWN, "heuristic"
        return
    if mode == "exact":
        _run_exact(rec, g, opts, escalate=False)
        return
    if mode == "oracle":
        _run_oracle(rec, g, opts)
        return
    # auto, snark branch
    if cls.is_cyclically_4_edge_connected and _run_heuristic(rec, g, opts):
        return
    if not cls.is_cyclically_4_edge_connected and opts.require_cyclic4:
        rec.note = "not cyclically 4-edge-connected"
        return
    _run_exact(rec, g, opts, escalate=True)


def _worker(args):
    return process_line(*args)


def run_pipeline(lines: Iterable, opts: Options, jobs: int = 1):
    """Yield VerdictRecords in input order."""
    items = []
    idx = 0
    for raw in lines:
        text = raw.decode("ascii", "replace") if isinstance(raw, bytes) else raw
        text = text.strip()
        if not text or text == ">>graph6<<":
            continue
        items.append((idx, text, opts))
        idx += 1
    if jobs <= 1:
        for it in items:
            yield _worker(it)
        return
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        yield from pool.map(_worker, items, chunksize=1)


def summarize(records: list) -> dict:
    rows = defaultdict(lambda: defaultdict(int))
    for r in records:
        row = rows[r.n]
        row["total"] += 1
        if r.filtered:
            row["filtered"] += 1
            continue
        if r.flags.get("3col") is False:
            row["snarks"] += 1
        if r.heuristic_passed:
            row["heuristic_passed"] += 1
        row[r.verdict] += 1
        row["heuristic_ms"] += r.heuristic_millis
        row["exact_ms"] += r.exact_millis
        row["ms"] += r.millis
        if r.error:
            row["errors"] += 1
    out = {"orders": {str(n): dict(v) for n, v in sorted(rows.items())}}
    out["total"] = len(records)
    out["errors"] = sum(1 for r in records if r.error)
    for key in (YES, NO, UNKNOWN, SKIPPED, FN4):
        out[key] = sum(1 for r in records if r.verdict == key and not r.filtered)
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="franknum", description=__doc__)
    p.add_argument("input", nargs="?", default="-", help="graph6 file, '-' for stdin")
    p.add_argument("--mode", choices=MODES, default="auto")
    p.add_argument("--snarks-only", action="store_true", help="ignore 3-edge-colourable graphs")
    p.add_argument("--require-cyclic4", action="store_true",
                   help="skip graphs that are not cyclically 4-edge-connected instead of flagging them")
    p.add_argument("--certificates", metavar="DIR", help="write certificate JSON files here")
    p.add_argument("--budget-nodes", type=int, default=None)
    p.add_argument("--timeout-ms", type=int, default=None, help="per-graph limit for the exact search")
    p.add_argument("--seed-climbs", type=int, default=32,
                   help="hill-climbed outer orientations tried first by the exact search (0 = off)")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--summary", metavar="PATH", help="write the JSON summary here instead of stderr")
    p.add_argument("--no-header", action="store_true")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        fh = sys.stdin if args.input == "-" else open(args.input, "r", encoding="ascii", errors="replace")
    except OSError as exc:
        print(f"franknum: cannot read {args.input}: {exc}", file=sys.stderr)
        return 2
    if args.certificates:
        os.makedirs(args.certificates, exist_ok=True)
    opts = Options(args.mode, args.snarks_only, args.require_cyclic4, args.certificates,
                   args.budget_nodes, args.timeout_ms, args.seed_climbs)
    records = []
    if not args.no_header:
        print("index\tn\tverdict\tmethod\tmillis\tcertificate")
    with fh:
        for rec in run_pipeline(fh, opts, args.jobs):
            records.append(rec)
            if rec.filtered:
                continue
            print(rec.tsv(), flush=True)
            if rec.note:
                log.info("graph %d: %s", rec.index, rec.note)
    summary = summarize(records)
    text = json.dumps(summary, indent=1)
    if args.summary:
        with open(args.summary, "w") as out:
            out.write(text + "\n")
    else:
        print(text, file=sys.stderr)
    return 1 if summary["errors"] else 0


def verify_main(argv=None) -> int:
    """Check certificate files from scratch; exit 1 if any fails."""
    p = argparse.ArgumentParser(prog="franknum-verify", description=verify_main.__doc__)
    p.add_argument("certificates", nargs="+")
    args = p.parse_args(argv)
    status = 0
    for path in args.certificates:
        try:
            with open(path) as fh:
                g, cert = FrankCertificate.from_json(fh.read())
        except (OSError, ValueError, KeyError, FrankError) as exc:
            print(f"{path}\tunreadable\t{exc}")
            status = 2 if status == 0 else status
            continue
        bad = first_uncovered_edge(g, cert)
        if bad is None:
            print(f"{path}\tok\t{len(cert.orientations)} orientations")
        else:
            print(f"{path}\tfail\tedge {bad} {g.edges[bad]} uncovered")
            status = 1
    return status


if __name__ == "__main__":
    sys.exit(main())
