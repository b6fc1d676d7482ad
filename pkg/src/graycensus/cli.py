"""Census command line: assemble, cross-check, and emit the full report.

The census gathers every quantity this package knows about one dimension:
the exact cycle count and its directed/relabeled variants, the perfect
matching count and its square, orbit and weight class counts, the prime
factorization, divisibility checks, and the asymptotic bound evaluations.
Every value carries a provenance tag: "computed" means this process derived
it from scratch; "paper-reported" means a stored reference constant whose
recomputation is infeasible at this scale (the 6-dimensional classification
took half a year on the original hardware).  Reports emit as JSON (counts
as decimal strings, since they overflow 64-bit consumers), CSV, or a text
table; emission is deterministic byte for byte.

Exit codes: 0 success, 2 consistency failure, 3 resource abort with a
checkpoint written, 4 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional

from . import bounds as bounds_mod
from . import classify as classify_mod
from . import counting, cube, numtheory

PROVENANCE_COMPUTED = "computed"
PROVENANCE_PAPER = "paper-reported"

# Reference constants for scales this package does not recompute: the
# exact 6-dimensional cycle count, the published classification counts,
# and the published rounded matching square.
H6_REFERENCE = 14754666508334433250560
AUT_REFERENCE = {5: 237675, 6: 147365405634413085}
WEIGHT_REFERENCE = {5: 28, 6: 550}
M2_ROUNDED_REFERENCE = {6: 2.667e26}

EXIT_OK = 0
EXIT_CONSISTENCY = 2
EXIT_RESOURCE = 3
EXIT_USAGE = 4

_FORMATS = ("json", "csv", "table")


@dataclass(frozen=True)
class ReportField:
    """One census value with its provenance tag."""

    name: str
    value: Optional[object]  # int (exact), float (stored rounding), or None
    provenance: str

    def display(self) -> str:
        if self.value is None:
            return "-"
        if isinstance(self.value, bool):
            return str(self.value)
        if isinstance(self.value, int):
            return str(self.value)
        return f"{self.value:.4g}"


@dataclass(frozen=True)
class CensusReport:
    """All census values for one dimension, cross-checked."""

    n: int
    fields: tuple[ReportField, ...]
    h_factorization: str
    checks: tuple[tuple[str, bool, str], ...]
    bound_rows: tuple[bounds_mod.BoundValue, ...]
    wall_time: float
    threads: int

    def field(self, name: str) -> ReportField:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def all_checks_pass(self) -> bool:
        return all(ok for _, ok, _ in self.checks)


def _default_memory_limit() -> int:
    return int(counting._available_memory() * 0.6)


def run_census(
    n: int,
    *,
    threads: int = 1,
    memory_limit: Optional[int] = None,
    checkpoint_dir: Optional[str] = None,
    extended: bool = False,
) -> CensusReport:
    """Compute every census value feasible at the requested scale.

    Classification beyond its supported range and any count too large to
    recompute fall back to stored reference constants tagged
    paper-reported.  The 6-dimensional cycle count is attempted only under
    the extended flag and runs inside a memory budget so an oversized
    sweep aborts with a checkpoint instead of exhausting the machine.
    """
    if not 2 <= n <= 6:
        raise ValueError(f"census supports 2 <= n <= 6, got {n}")
    start = time.time()
    opts = dict(threads=threads, checkpoint_dir=checkpoint_dir)

    if n < 6:
        h_value = counting.count_hamiltonian_cycles(
            n, memory_limit=memory_limit, **opts)
        h_prov = PROVENANCE_COMPUTED
    elif extended:
        budget = memory_limit if memory_limit is not None else _default_memory_limit()
        h_value = counting.count_hamiltonian_cycles(
            n, memory_limit=budget, **opts)
        h_prov = PROVENANCE_COMPUTED
    else:
        h_value = H6_REFERENCE
        h_prov = PROVENANCE_PAPER

    oh = counting.directed_count(h_value)
    eh = counting.equivalence_count(h_value, n)

    if n < 6 or extended:
        m_value: Optional[int] = counting.count_perfect_matchings(
            n, memory_limit=memory_limit, **opts)
        m2_value: object = m_value * m_value
        m_prov = PROVENANCE_COMPUTED
    else:
        m_value = None
        m2_value = M2_ROUNDED_REFERENCE[n]
        m_prov = PROVENANCE_PAPER

    classify_limit = 4 if not extended else classify_mod.MAX_ENUMERATION_DIMENSION
    if n <= classify_limit:
        summary = classify_mod.classify_automorphism(n)
        aut_value, weight_value = summary.count, summary.weight_count
        class_prov = PROVENANCE_COMPUTED
        orbit_total: Optional[int] = summary.total_cycles
    else:
        aut_value = AUT_REFERENCE[n] if n in AUT_REFERENCE else None
        weight_value = WEIGHT_REFERENCE[n] if n in WEIGHT_REFERENCE else None
        class_prov = PROVENANCE_PAPER
        orbit_total = None

    fact = numtheory.factorize(h_value)

    checks: list[tuple[str, bool, str]] = []

    def check(name: str, ok: bool, detail: str) -> None:
        checks.append((name, bool(ok), detail))

    check("directed_count", oh == 2 * h_value, f"OH = {oh}")
    half = math.factorial(n) // 2
    check("relabeled_count", eh * half == h_value, f"EH * n!/2 = {eh * half}")
    check("half_factorial_divisibility",
          numtheory.check_half_factorial_divisibility(h_value, n),
          f"H mod n!/2 = {h_value % half}")
    check("factorization_recombines", fact.recombine() == h_value, str(fact))
    if n >= 3:
        odd = numtheory.odd_prime_divisor_count(h_value, n)
        check("odd_prime_divisors", odd == n - 3, f"{odd} odd primes, want n-3")
    if m_value is not None:
        check("matching_square", m2_value == m_value * m_value, f"M^2 = {m2_value}")
        check("cycle_matching_bound", h_value <= m2_value,
              f"H = {h_value} <= M^2 = {m2_value}")
    else:
        check("cycle_matching_bound", h_value <= float(m2_value),
              f"H = {h_value} <= M^2 ~ {m2_value}")
    if aut_value is not None and weight_value is not None:
        check("class_count_monotonicity",
              weight_value <= aut_value <= h_value,
              f"Weight = {weight_value} <= Aut = {aut_value} <= H")
    if orbit_total is not None:
        check("orbit_sizes_sum", orbit_total == h_value,
              f"sum of orbit sizes = {orbit_total}")

    a_bound, b_bound = bounds_mod.perezhogin_potapov_bounds(n, 0.0)
    knuth = bounds_mod.knuth_lower_bound(n, 0.0)

    fields = (
        ReportField("H", h_value, h_prov),
        ReportField("OH", oh, h_prov),
        ReportField("EH", eh, h_prov),
        ReportField("M", m_value, m_prov),
        ReportField("M2", m2_value, m_prov),
        ReportField("Aut", aut_value, class_prov),
        ReportField("Weight", weight_value, class_prov),
    )
    return CensusReport(
        n=n,
        fields=fields,
        h_factorization=str(fact),
        checks=tuple(checks),
        bound_rows=(a_bound, b_bound, knuth),
        wall_time=time.time() - start,
        threads=threads,
    )


# ---------------------------------------------------------------------------
# Emission


def emit(report: CensusReport, fmt: str) -> bytes:
    """Deterministic serialization; counts emit as decimal strings."""
    if fmt == "json":
        return _emit_json(report)
    if fmt == "csv":
        return _emit_csv(report)
    if fmt == "table":
        return _emit_table(report)
    raise ValueError(f"unknown format {fmt!r}")


def _value_str(value: Optional[object]) -> Optional[object]:
    if value is None:
        return None
    if isinstance(value, int):
        return str(value)
    return float(value)


def _emit_json(report: CensusReport) -> bytes:
    doc = {
        "n": report.n,
        "values": {f.name: _value_str(f.value) for f in report.fields},
        "provenance": {f.name: f.provenance for f in report.fields},
        "H_factorization": report.h_factorization,
        "checks": [
            {"name": name, "ok": ok, "detail": detail}
            for name, ok, detail in report.checks
        ],
        "bounds": [
            {
                "name": b.name,
                "o_term": b.o_term,
                "log10": None if b.log10 is None else float(b.log10),
                "display": b.display(),
                "asymptotic_only": b.asymptotic_only,
            }
            for b in report.bound_rows
        ],
        "wall_time_s": round(report.wall_time, 3),
        "threads": report.threads,
    }
    return json.dumps(doc, separators=(",", ":")).encode()


def _emit_csv(report: CensusReport) -> bytes:
    lines = ["name,value,provenance"]
    for f in report.fields:
        lines.append(f"{f.name},{f.display()},{f.provenance}")
    lines.append(f"H_factorization,{report.h_factorization},{report.field('H').provenance}")
    for name, ok, _ in report.checks:
        lines.append(f"check:{name},{'pass' if ok else 'FAIL'},computed")
    for b in report.bound_rows:
        lines.append(f"bound:{b.name},{b.display()},computed")
    return ("\n".join(lines) + "\n").encode()


def _round_sig(value: object, digits: int = 4) -> str:
    x = float(value)
    if x == 0:
        return "0"
    exp = math.floor(math.log10(abs(x)))
    mant = x / 10.0**exp
    mant = round(mant, digits - 1)
    if mant >= 10.0:
        mant /= 10.0
        exp += 1
    return f"{mant:.{digits - 1}f}e+{exp:02d}" if exp >= 0 else f"{mant:.{digits - 1}f}e-{-exp:02d}"


def _emit_table(report: CensusReport) -> bytes:
    header = ["n", "H_n", "M_n^2", "M_n^2_rounded", "Aut_n", "Weight_n"]
    m2 = report.field("M2")
    if isinstance(m2.value, int):
        m2_exact, m2_rounded = str(m2.value), _round_sig(m2.value)
    elif m2.value is None:
        m2_exact = m2_rounded = "-"
    else:
        m2_exact, m2_rounded = "-", _round_sig(m2.value)
    row = [
        str(report.n),
        report.field("H").display(),
        m2_exact,
        m2_rounded,
        report.field("Aut").display(),
        report.field("Weight").display(),
    ]
    widths = [max(len(h), len(v)) for h, v in zip(header, row)]
    fmt_row = "  ".join(f"{{:<{w}}}" for w in widths)
    lines = [
        fmt_row.format(*header),
        fmt_row.format(*row),
        "",
        f"provenance: " + ", ".join(f"{f.name}={f.provenance}" for f in report.fields),
        f"H factorization: {report.h_factorization}",
        "checks: " + ("all pass" if report.all_checks_pass else "FAILURES: " + ", ".join(
            name for name, ok, _ in report.checks if not ok)),
    ]
    return ("\n".join(lines) + "\n").encode()


def census_table(reports: list[CensusReport]) -> str:
    """Multi-row text table across dimensions (exact and rounded squares)."""
    header = ["n", "H_n", "M_n^2", "M_n^2_rounded", "Aut_n", "Weight_n"]
    rows = []
    for r in reports:
        m2 = r.field("M2")
        if isinstance(m2.value, int):
            exact, rounded = str(m2.value), _round_sig(m2.value)
        elif m2.value is None:
            exact = rounded = "-"
        else:
            exact, rounded = "-", _round_sig(m2.value)
        rows.append([
            str(r.n), r.field("H").display(), exact, rounded,
            r.field("Aut").display(), r.field("Weight").display(),
        ])
    widths = [max(len(header[i]), *(len(row[i]) for row in rows))
              for i in range(len(header))]
    fmt_row = "  ".join(f"{{:<{w}}}" for w in widths)
    return "\n".join([fmt_row.format(*header)] + [fmt_row.format(*row) for row in rows])


# ---------------------------------------------------------------------------
# Argument handling


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse default exits 2; keep 4
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="graycensus",
                     description="Exact census of cyclic Gray codes on the n-cube")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--memory-limit", type=int, default=None,
                        help="byte budget; exceeding it aborts with a checkpoint")
    parser.add_argument("--checkpoint-dir", default=None,
                        help="fallback: GRAYCENSUS_CHECKPOINT_DIR")
    parser.add_argument("--format", choices=_FORMATS, default="table")
    parser.add_argument("--extended", action="store_true",
                        help="permit multi-hour tasks")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="full report for one dimension")
    p.add_argument("n", type=int)

    p = sub.add_parser("count", help="exact Hamiltonian cycle count")
    p.add_argument("n", type=int)
    p.add_argument("--order", choices=("auto", "natural", "direction-major"),
                   default="auto")

    p = sub.add_parser("matchings", help="exact perfect matching count")
    p.add_argument("n", type=int)

    p = sub.add_parser("classify", help="cycle orbits under the automorphism group")
    p.add_argument("n", type=int)

    p = sub.add_parser("weights", help="realized weight spectra with class counts")
    p.add_argument("n", type=int)

    p = sub.add_parser("bounds", help="asymptotic bound evaluations as CSV")
    p.add_argument("n", type=int)
    p.add_argument("--o-term", type=float, default=0.0)
    p.add_argument("--historical", action="store_true",
                   help="append the published 6-cube upper bound table")

    p = sub.add_parser("factor", help="prime factorization of a count")
    p.add_argument("value", type=int)

    p = sub.add_parser("verify-partition",
                       help="check that cycles given one per line partition the cube edges")
    p.add_argument("n", type=int)
    p.add_argument("path", help="file of edge sets, 'u-v,u-v,...' per line")

    p = sub.add_parser("resume", help="resume a checkpointed counting sweep")
    p.add_argument("checkpoint")
    return parser


def _checkpoint_dir(args) -> Optional[str]:
    if args.checkpoint_dir:
        return args.checkpoint_dir
    return os.environ.get("GRAYCENSUS_CHECKPOINT_DIR") or None


def _count_options(args) -> dict:
    return dict(threads=args.threads, memory_limit=args.memory_limit,
                checkpoint_dir=_checkpoint_dir(args))


def _emit_count(args, name: str, n: int, value: int) -> None:
    if args.format == "json":
        print(json.dumps({"n": n, name: str(value)}, separators=(",", ":")))
    elif args.format == "csv":
        print(f"n,{name}\n{n},{value}")
    else:
        print(value)


def _require_extended(args, task: str, needed: bool) -> None:
    if needed and not args.extended:
        raise _UsageError(f"{task} is a long run; pass --extended to confirm")


class _UsageError(Exception):
    pass


def _run(args) -> int:
    if args.command == "census":
        report = run_census(args.n, extended=args.extended, **_count_options(args))
        sys.stdout.buffer.write(emit(report, args.format))
        if args.format == "json":
            sys.stdout.write("\n")
        return EXIT_OK if report.all_checks_pass else EXIT_CONSISTENCY

    if args.command == "count":
        _require_extended(args, "counting n >= 6", args.n >= 6)
        order = {"natural": counting.natural_edge_order,
                 "direction-major": counting.direction_major_order,
                 "auto": lambda _n: None}[args.order](args.n)
        value = counting.count_hamiltonian_cycles(
            args.n, order=order, **_count_options(args))
        _emit_count(args, "H", args.n, value)
        return EXIT_OK

    if args.command == "matchings":
        _require_extended(args, "matchings n >= 6", args.n >= 6)
        value = counting.count_perfect_matchings(args.n, **_count_options(args))
        _emit_count(args, "M", args.n, value)
        return EXIT_OK

    if args.command == "classify":
        _require_extended(args, "classification at n = 5", args.n >= 5)
        summary = classify_mod.classify_automorphism(args.n)
        for line in summary.lines():
            print(line)
        print(json.dumps(summary.summary(), separators=(",", ":")))
        return EXIT_OK

    if args.command == "weights":
        _require_extended(args, "classification at n = 5", args.n >= 5)
        spectra = classify_mod.classify_weights(args.n)
        for spectrum in sorted(spectra):
            print("+".join(str(k) for k in spectrum), spectra[spectrum])
        return EXIT_OK

    if args.command == "bounds":
        a, b = bounds_mod.perezhogin_potapov_bounds(args.n, args.o_term)
        knuth = bounds_mod.knuth_lower_bound(args.n, args.o_term)
        print(bounds_mod.bounds_csv([a, b, knuth]))
        if args.historical:
            for name, value in bounds_mod.historical_bounds_table():
                print(f"{name},{value:.1e}")
        return EXIT_OK

    if args.command == "factor":
        fact = numtheory.factorize(args.value)
        print(fact)
        return EXIT_OK if fact.complete else EXIT_CONSISTENCY

    if args.command == "verify-partition":
        parts = []
        with open(args.path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    parts.append(cube.CycleEdgeSet.from_string(args.n, line))
        result = cube.verify_cycle_partition(args.n, parts)
        print("partition OK" if result else f"partition invalid: {result.reason}")
        return EXIT_OK if result else EXIT_CONSISTENCY

    if args.command == "resume":
        run = counting.resume_from_checkpoint(
            args.checkpoint, **_count_options(args))
        value = run.run()
        _emit_count(args, "H" if run.task == counting.TASK_HAMILTONIAN else "M",
                    run.n, value)
        return EXIT_OK

    raise AssertionError(f"unhandled command {args.command!r}")


def main(argv: Optional[list[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except counting.MemoryBudgetExceeded as exc:
        print(f"resource abort: {exc}", file=sys.stderr)
        if exc.checkpoint_path is not None:
            print(f"checkpoint: {exc.checkpoint_path}", file=sys.stderr)
        return EXIT_RESOURCE
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, counting.CheckpointError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
