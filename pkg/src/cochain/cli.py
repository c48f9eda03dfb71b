"""Command line front end.

    cochain cohomology --theory shukla --ground Z --algebra z2.alg --module z2.bim --max-degree 8
    cochain verify all --seed 7

Exit codes: 0 success, 1 verify failure, 2 parse error, 3 budget exceeded,
4 mathematical precondition failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

from .algebra import (
    parse_algebra,
    parse_bimodule,
    rebase_algebra,
    rebase_bimodule,
)
from .config import parse_budget
from .errors import CochainError, ParseError
from .exactmod import BaseRing

SCHEMA = "cochain/v1"
THEORIES = ("hochschild", "shukla", "bicomplex")
EXIT_VERIFY, EXIT_PARSE, EXIT_BUDGET, EXIT_MATH = 1, 2, 3, 4


@dataclass
class JobSpec:
    command: str
    algebra: str | None = None
    module: str | None = None
    ground: str | None = None
    theory: str = "shukla"
    strategy: str = "auto"
    n_max: int = 4
    fmt: str = "table"
    ground_algebra: str | None = None
    structure_map: str | None = None
    budget: str | None = None
    suite: str | None = None
    seed: int = 0
    dump_dir: str = "verify-failures"


@dataclass
class Report:
    theory: str
    ground: str
    strategy: str
    groups: list  # [(degree, divisors tuple)]
    seconds: float = 0.0
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "theory": self.theory,
            "ground": self.ground,
            "strategy": self.strategy,
            "degrees": [
                {"degree": n, "divisors": list(d), "dimension": len(d), "group": _group_str(d)}
                for n, d in self.groups
            ],
            "seconds": self.seconds,
            "notes": list(self.notes),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_table(self) -> str:
        lines = [
            f"theory    {self.theory}",
            f"ground    {self.ground}",
            f"strategy  {self.strategy}",
            "degree  dim  group",
        ]
        for n, d in self.groups:
            lines.append(f"{n:>6}  {len(d):>3}  {_group_str(d)}")
        for note in self.notes:
            lines.append(f"note: {note}")
        lines.append(f"time {self.seconds:.3f} s")
        return "\n".join(lines)


def _group_str(d) -> str:
    if not d:
        return "0"
    return " + ".join("Z" if x == 0 else f"Z/{x}" for x in d)


_REPORT_KEYS = {"schema", "theory", "ground", "strategy", "degrees", "seconds", "notes"}
_DEGREE_KEYS = {"degree", "divisors", "dimension", "group"}


def parse_report(text: str) -> Report:
    """Inverse of Report.to_json; rejects unknown keys and other schemas."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON: {e.msg}", e.lineno, e.colno) from None
    if not isinstance(data, dict) or set(data) != _REPORT_KEYS:
        raise ParseError("report keys differ from the cochain/v1 schema")
    if data["schema"] != SCHEMA:
        raise ParseError(f"unsupported schema {data['schema']!r}")
    groups = []
    for entry in data["degrees"]:
        if set(entry) != _DEGREE_KEYS:
            raise ParseError("degree entry keys differ from the cochain/v1 schema")
        d = tuple(int(x) for x in entry["divisors"])
        if entry["dimension"] != len(d) or entry["group"] != _group_str(d):
            raise ParseError(f"inconsistent entry for degree {entry['degree']}")
        groups.append((int(entry["degree"]), d))
    return Report(data["theory"], data["ground"], data["strategy"], groups,
                  float(data["seconds"]), list(data["notes"]))


# ---------------------------------------------------------------------------
# input loading


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None


def parse_matrix(text: str, rows: int, cols: int) -> list:
    """'1 0 | 0 1' -> [[1, 0], [0, 1]] of the given shape."""
    out = []
    for part in text.split("|"):
        try:
            out.append([int(x) for x in part.split()])
        except ValueError:
            raise ParseError(f"structure map entries must be integers: {part.strip()!r}") from None
    if len(out) != rows or any(len(r) != cols for r in out):
        raise ParseError(f"structure map must be {rows}x{cols}")
    return out


def load_inputs(job: JobSpec):
    """(R, M, ground algebra or None, kmap or None) rebased to the requested ground."""
    if not job.algebra:
        raise ParseError("--algebra is required")
    R = parse_algebra(_read(job.algebra))
    if job.module in (None, "regular"):
        M = R.regular_bimodule()
    else:
        M = parse_bimodule(_read(job.module), R)
    if job.ground:
        try:
            G = BaseRing.parse(job.ground)
        except ValueError as e:
            raise ParseError(str(e)) from None
        R2 = rebase_algebra(R, G)
        if R2 is not R:
            M = rebase_bimodule(M, R2)
            R = R2
    K = kmap = None
    if job.ground_algebra:
        K = parse_algebra(_read(job.ground_algebra))
        if job.structure_map is None:
            raise ParseError("--ground-algebra needs --structure-map")
        kmap = parse_matrix(job.structure_map, R.dim, K.dim)
    elif job.structure_map is not None:
        raise ParseError("--structure-map needs --ground-algebra")
    return R, M, K, kmap


# ---------------------------------------------------------------------------
# commands


def compute(job: JobSpec) -> Report:
    R, M, K, kmap = load_inputs(job)
    t0 = time.perf_counter()
    notes = []
    if job.theory == "hochschild":
        from .hochschild import hochschild_cohomology

        if K is not None:
            raise ParseError("hochschild takes no ground algebra; use --theory bicomplex")
        res = hochschild_cohomology(R, M, job.n_max, representatives=False)
        strategy = "bar"
    elif job.theory == "shukla":
        from .shukla import ShuklaQuery, shukla_cohomology

        res = shukla_cohomology(ShuklaQuery(R, M, job.n_max, job.strategy, K, kmap))
        strategy = res.strategy
    elif job.theory == "bicomplex":
        from .algebra import ground_algebra
        from .bicomplex import BicomplexSpec, total_cohomology

        if K is None:
            K, kmap = ground_algebra(R.base), [[x] for x in R.unit]
            notes.append("ground algebra defaults to the prime field")
        res = total_cohomology(BicomplexSpec(K, R, M, kmap, job.n_max))
        strategy = "bicomplex"
    else:
        raise ParseError(f"unknown theory {job.theory!r}")
    ground = str(R.base) if K is None else f"{K.base}-algebra of dim {K.dim}"
    groups = [(n, tuple(res[n].divisors)) for n in range(job.n_max + 1)]
    return Report(job.theory, ground, strategy, groups, time.perf_counter() - t0, notes)


def cmd_cohomology(job: JobSpec, out=None) -> int:
    out = out or sys.stdout
    report = compute(job)
    print(report.to_json() if job.fmt == "json" else report.to_table(), file=out)
    return 0


def cmd_verify(job: JobSpec, out=None) -> int:
    out = out or sys.stdout
    from .suites import run_suite

    print(f"seed {job.seed}", file=out)
    try:
        checks = run_suite(job.suite, job.seed)
    except KeyError:
        raise ParseError(f"unknown suite {job.suite!r}") from None
    failed = 0
    for c in checks:
        print(f"{'PASS' if c.ok else 'FAIL'}  {c.suite:<10}  {c.name}: {c.detail}", file=out)
        if not c.ok:
            failed += 1
            _dump(job, c)
    print(f"{len(checks) - failed}/{len(checks)} checks passed", file=out)
    return EXIT_VERIFY if failed else 0


def _dump(job: JobSpec, c) -> None:
    slug = "".join(ch if ch.isalnum() else "-" for ch in f"{c.suite}-{c.name}").strip("-")
    d = Path(job.dump_dir) / slug
    d.mkdir(parents=True, exist_ok=True)
    for name, text in c.inputs.items():
        (d / name).write_text(text, encoding="utf-8")
    (d / "README.txt").write_text(
        f"suite {c.suite}\ncheck {c.name}\nseed {job.seed}\ndetail {c.detail}\n"
        f"rerun: python -m cochain verify {c.suite} --seed {job.seed}\n",
        encoding="utf-8",
    )


# ---------------------------------------------------------------------------
# argument parsing


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cochain", description="Hochschild, Shukla and bicomplex cohomology of finite algebras.")
    p.add_argument("--budget", help="size caps, e.g. columns=500000,n_max=7 (overrides COCHAIN_BUDGET)")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    c = sub.add_parser("cohomology", help="compute cohomology groups")
    c.add_argument("--theory", choices=THEORIES, default="shukla")
    c.add_argument("--algebra", required=True, help="algebra file")
    c.add_argument("--module", default="regular", help="bimodule file, or 'regular'")
    c.add_argument("--ground", help="ground ring (Z, Z/m, Fp); the algebra is viewed over it")
    c.add_argument("--ground-algebra", help="commutative ground algebra file (over a prime field)")
    c.add_argument("--structure-map", help="matrix of ground algebra -> R, rows separated by '|'")
    c.add_argument("--strategy", default="auto",
                   choices=("auto", "hochschild", "builtin", "killing-cycles", "bicomplex"))
    c.add_argument("--max-degree", type=int, default=4, dest="n_max")
    c.add_argument("--format", choices=("table", "json"), default="table", dest="fmt")
    v = sub.add_parser("verify", help="run invariant batteries")
    v.add_argument("suite", choices=("complexes", "extensions", "kunneth", "sigma", "qlow", "bicomplex", "all"))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--dump-dir", default="verify-failures")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    job = JobSpec(**{k: v for k, v in vars(args).items() if k in JobSpec.__dataclass_fields__})
    if job.n_max < 0:
        print("error: --max-degree must be non-negative", file=sys.stderr)
        return EXIT_PARSE
    saved = os.environ.get("COCHAIN_BUDGET")
    try:
        if job.budget is not None:
            parse_budget(job.budget)
            os.environ["COCHAIN_BUDGET"] = job.budget
        if job.command == "cohomology":
            return cmd_cohomology(job)
        return cmd_verify(job)
    except CochainError as e:
        code = e.exit_code
        print(f"error ({type(e).__name__}): {e}", file=sys.stderr)
        if e.witness is not None and not isinstance(e, ParseError):
            print(f"witness: {e.witness}", file=sys.stderr)
        return code
    finally:
        # the override is scoped to this invocation
        if saved is None:
            os.environ.pop("COCHAIN_BUDGET", None)
        else:
            os.environ["COCHAIN_BUDGET"] = saved


__all__ = ["JobSpec", "Report", "parse_report", "compute", "main", "build_parser"]
