"""Command line front end.

    fftamagawa run [DESCRIPTOR] [--suites poles,chain] [--entry 2A2] [--out-dir reports] ...
    fftamagawa catalog            # print the default catalog descriptor

The exit status of ``run`` is 0 exactly when every check of every selected
entry passes, 1 when some check fails and 2 on usage or descriptor errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .catalog import SUITES, CatalogEntry, DescriptorError, default_catalog, default_catalog_text, load_catalog
from .suites import ORACLE_CSV_HEADER, EntryResult, RunOptions, run_entry


def _csv_list(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fftamagawa", description="Intertwining operators and Tamagawa numbers over F_q(t).")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run verification suites on catalog entries")
    run.add_argument("descriptor", nargs="?", help="descriptor file (default: built-in catalog)")
    run.add_argument("--suites", default=",".join(SUITES), help=f"comma-separated subset of {', '.join(SUITES)}")
    run.add_argument("--entry", action="append", default=[], help="entry name to run (repeatable or comma-separated)")
    run.add_argument("--depth", type=int, default=8, help="shell depth of the local oracle")
    run.add_argument("--s", type=float, default=2.0, help="real s > 1 for numeric comparisons")
    run.add_argument("--q", type=int, default=None, help="override q for every entry")
    run.add_argument("--out-dir", default="reports", help="directory for report files")
    run.add_argument("--truncation-degree", type=int, default=12, help="largest closed-point degree in Euler checks")
    run.add_argument("--euler-tol", type=float, default=1e-8)
    run.add_argument("--oracle-tol", type=float, default=1e-4)
    run.add_argument("--hecke-samples", type=int, default=100)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--jobs", type=int, default=1, help="worker processes")
    run.add_argument("--quiet", action="store_true", help="print only the summary line")

    sub.add_parser("catalog", help="print the default catalog descriptor")
    return parser


def _select(entries: list[CatalogEntry], names: list[str]) -> list[CatalogEntry]:
    wanted = [n for chunk in names for n in _csv_list(chunk)]
    if not wanted:
        return entries
    by_name = {e.name: e for e in entries}
    missing = [n for n in wanted if n not in by_name]
    if missing:
        raise DescriptorError(f"unknown entries: {', '.join(missing)}")
    return [by_name[n] for n in dict.fromkeys(wanted)]


def _run_one(args: tuple) -> EntryResult:
    entry, suites, opts = args
    return run_entry(entry, suites, opts)


def run_entries(entries: list[CatalogEntry], suites: tuple[str, ...], opts: RunOptions, jobs: int = 1) -> list[EntryResult]:
    tasks = [(e, suites, opts) for e in entries]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_one, tasks))
    else:
        results = [_run_one(t) for t in tasks]
    return sorted(results, key=lambda r: r.name)


def oracle_csv(results: list[EntryResult]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(ORACLE_CSV_HEADER)
    for r in results:
        writer.writerows(r.csv_rows)
    return buf.getvalue()


def summary_text(results: list[EntryResult], suites: tuple[str, ...]) -> str:
    lines = [f"suites: {', '.join(suites)}", ""]
    for r in results:
        failed = [c for c in r.checks if not c.ok]
        lines.append(f"{'PASS' if r.ok else 'FAIL'}  {r.name:<12} {r.label:<14} {len(r.checks) - len(failed)}/{len(r.checks)}")
        for c in failed:
            lines.append(f"      {c.line()}")
    passed = sum(r.ok for r in results)
    lines += ["", f"{passed}/{len(results)} entries passed"]
    return "\n".join(lines) + "\n"


def write_reports(results: list[EntryResult], suites: tuple[str, ...], out_dir: Path) -> None:
    out_dir.mkdir(parents=True, exist_ok=True)
    for r in results:
        (out_dir / f"{r.name}.txt").write_text(r.text())
    (out_dir / "summary.txt").write_text(summary_text(results, suites))
    (out_dir / "oracle.csv").write_text(oracle_csv(results))


def cmd_run(ns: argparse.Namespace) -> int:
    suites = tuple(_csv_list(ns.suites))
    unknown = [s for s in suites if s not in SUITES]
    if unknown:
        print(f"error: unknown suites {', '.join(unknown)}", file=sys.stderr)
        return 2
    if ns.s <= 1:
        print("error: --s must exceed 1", file=sys.stderr)
        return 2
    try:
        entries = load_catalog(ns.descriptor) if ns.descriptor else default_catalog()
        entries = _select(entries, ns.entry)
        if ns.q is not None:
            entries = [e.with_q(ns.q) for e in entries]
    except (DescriptorError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:  # invalid --q override
        print(f"error: {exc}", file=sys.stderr)
        return 2
    opts = RunOptions(
        s=ns.s,
        depth=ns.depth,
        truncation_degree=ns.truncation_degree,
        euler_tol=ns.euler_tol,
        oracle_tol=ns.oracle_tol,
        hecke_samples=ns.hecke_samples,
        seed=ns.seed,
    )
    results = run_entries(entries, suites, opts, ns.jobs)
    write_reports(results, suites, Path(ns.out_dir))
    text = summary_text(results, suites)
    print(text.splitlines()[-1] if ns.quiet else text, end="\n" if ns.quiet else "")
    return 0 if all(r.ok for r in results) else 1


def main(argv: list[str] | None = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "catalog":
        print(default_catalog_text(), end="")
        return 0
    return cmd_run(ns)


if __name__ == "__main__":
    sys.exit(main())
