"""Command-line front end.

    parity-descents verify --id B1 --nmax 6 --q one --format json
    parity-descents table --family A --n 2
    parity-descents table --kind g --nmax 8 --format csv
    parity-descents gamma --family ATILDE --n 5 --basis GAMMA
    parity-descents tree --word 562314 --apply-psi 2
    parity-descents report --out report.json

Exit codes: 0 when every required check passes, 1 on a required mismatch
(or an I/O failure), 2 on a usage error. Recorded generic-q outcomes never
change the exit code.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import gamma, identities, trees
from .perm_core import FamilyId, distribution

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _split_ids(values: list[str] | None) -> list[str] | None:
    if values is None:
        return None
    out = [v.strip() for chunk in values for v in chunk.split(",") if v.strip()]
    if not out:
        raise UsageError("empty identity filter")
    known = set(identities.all_ids())
    unknown = [v for v in out if v not in known]
    if unknown:
        raise UsageError(f"unknown identity id(s): {', '.join(unknown)}")
    return out


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _report_text(reports) -> str:
    lines = []
    for r in reports:
        line = f"{r.id:<15} n<={r.nmax:<3} q={r.qmode:<8} {r.scope:<9} {r.status:<5} {r.elapsed_ms:9.1f} ms"
        if r.first_mismatch is not None:
            fm = r.first_mismatch
            line += f"\n    first mismatch at n={fm.n}\n    lhs: {fm.lhs.render()}\n    rhs: {fm.rhs.render()}"
        lines.append(line)
    return "\n".join(lines) + "\n"


def _exit_for(reports) -> int:
    return EXIT_OK if all(r.passed for r in reports if r.scope == "required") else EXIT_FAIL


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    ids = _split_ids(args.id)
    if ids is None:
        raise UsageError("verify needs --id")
    if args.nmax is not None and args.nmax < 2:
        raise UsageError("--nmax must be at least 2")
    tasks = []
    for identity in ids:
        spec = identities.get_spec(identity)
        nmax = args.nmax if args.nmax is not None else identities.default_nmax(identity)
        if args.q is None:
            tasks.append(identities.Task(identity, nmax, spec.required_qmode(), "required"))
            continue
        if args.q == "generic" and spec.qscope == identities.Q_ONE:
            raise UsageError(f"{identity} is a q = 1 identity; use --q one")
        scope = "recorded" if args.q in spec.recorded_qmodes() else "required"
        tasks.append(identities.Task(identity, nmax, args.q, scope))
    reports = identities.run_catalog(tasks, jobs=args.jobs)
    if args.format == "json":
        payload = [r.to_json() for r in reports]
        text = json.dumps(payload[0] if len(payload) == 1 else payload, indent=2) + "\n"
    elif args.format == "text":
        text = _report_text(reports)
    else:
        raise UsageError("verify supports --format text or json")
    _emit(text, args.out)
    return _exit_for(reports)


def cmd_table(args) -> int:
    if args.kind is not None:
        if args.family is not None:
            raise UsageError("give either --family or --kind, not both")
        nmax = args.nmax or args.n
        if nmax is None or nmax < 1:
            raise UsageError("--kind needs --nmax (or --n) of at least 1")
        if args.format == "json":
            rows = {n: list(gamma.count_table(n, args.kind).values) for n in range(1, nmax + 1)}
            text = json.dumps({"kind": args.kind, "rows": rows}, indent=2) + "\n"
        elif args.format == "csv":
            text = gamma.triangle_csv(args.kind, nmax)
        else:
            text = "".join(
                f"{n}: {' '.join(map(str, gamma.count_table(n, args.kind).values))}\n" for n in range(1, nmax + 1)
            )
        _emit(text, args.out)
        return EXIT_OK
    if args.family is None:
        raise UsageError("table needs --family or --kind")
    try:
        family = FamilyId.parse(args.family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ns = [args.n] if args.n is not None else list(range(1, (args.nmax or 0) + 1))
    if not ns or min(ns) < 1:
        raise UsageError("table needs --n or --nmax of at least 1")
    polys = {n: distribution(n, family, jobs=args.jobs).render() for n in ns}
    if args.format == "json":
        text = json.dumps({"family": family.value, "polynomials": polys}, indent=2) + "\n"
    elif args.format == "csv":
        text = "n,poly\n" + "".join(f'{n},"{p}"\n' for n, p in polys.items())
    elif len(ns) == 1:
        text = polys[ns[0]] + "\n"
    else:
        text = "".join(f"{n}: {p}\n" for n, p in polys.items())
    _emit(text, args.out)
    return EXIT_OK


def cmd_gamma(args) -> int:
    if args.family is None or args.n is None:
        raise UsageError("gamma needs --family and --n")
    m = args.n // 2
    try:
        family = FamilyId.parse(args.family)
        exp = gamma.expand(distribution(args.n, family), m, args.basis)
    except gamma.ExpansionError as exc:
        sys.stderr.write(f"not representable: {exc}\n")
        return EXIT_FAIL
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.format == "json":
        text = json.dumps({"family": family.value, "n": args.n, "basis": args.basis, "m": m,
                           "coefficients": list(exp.coeffs)}, indent=2) + "\n"
    elif args.format == "csv":
        text = "j,coefficient\n" + "".join(f"{j},{c}\n" for j, c in enumerate(exp.coeffs))
    else:
        text = " ".join(map(str, exp.coeffs)) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _parse_word(text: str) -> tuple[int, ...]:
    try:
        if "," in text or " " in text.strip():
            return tuple(int(v) for v in text.replace(",", " ").split())
        return tuple(int(ch) for ch in text)
    except ValueError:
        raise UsageError(f"cannot read word {text!r}") from None


def cmd_tree(args) -> int:
    if args.word is None:
        raise UsageError("tree needs --word")
    word = _parse_word(args.word)
    try:
        tree = trees.build_tree(word)
        if tree is None:
            raise UsageError("empty word")
        if args.apply_psi:
            tree = trees.hr_apply(tree, args.apply_psi)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    text = trees.render_ascii(tree)
    if args.format == "json":
        text = json.dumps({"word": list(tree.inorder()), "tree": text.splitlines()}, indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK


def cmd_report(args) -> int:
    ids = _split_ids(args.id)
    tasks = identities.plan(ids, nmax_a=args.nmax_a, nmax_b=args.nmax_b)
    reports = identities.run_catalog(tasks, jobs=args.jobs)
    payload = identities.summarize(reports)
    payload["nmax_a"] = args.nmax_a or identities.DEFAULT_NMAX["plain"]
    payload["nmax_b"] = args.nmax_b or identities.DEFAULT_NMAX["signed"]
    text = json.dumps(payload, indent=2) + "\n"
    try:
        _emit(text, args.out)
    except OSError as exc:
        sys.stderr.write(f"could not write report: {exc}\n")
        sys.stdout.write(text)
        return EXIT_FAIL
    return _exit_for(reports)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="parity-descents", description="Exact verification of descent-parity identities.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats=("text", "json", "csv")):
        sp.add_argument("--format", choices=formats, default="text")
        sp.add_argument("--out", help="write output to this file instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker count")

    v = sub.add_parser("verify", help="verify catalog identities")
    v.add_argument("--id", action="append", help="identity id (repeatable or comma separated)")
    v.add_argument("--nmax", type=int)
    v.add_argument("--q", choices=("one", "generic"))
    common(v)

    t = sub.add_parser("table", help="distribution polynomials or count-table triangles")
    t.add_argument("--family")
    t.add_argument("--kind", choices=gamma.TABLE_KINDS)
    t.add_argument("--n", type=int)
    t.add_argument("--nmax", type=int)
    common(t)

    g = sub.add_parser("gamma", help="symmetric or gamma expansion of a family polynomial")
    g.add_argument("--family")
    g.add_argument("--n", type=int)
    g.add_argument("--basis", choices=gamma.BASES, default="GAMMA")
    common(g)

    tr = sub.add_parser("tree", help="render a min-max tree")
    tr.add_argument("--word")
    tr.add_argument("--apply-psi", type=int, nargs="*", default=[], help="1-based positions")
    common(tr, formats=("text", "json"))

    r = sub.add_parser("report", help="run the full catalog and write a JSON summary")
    r.add_argument("--id", action="append", help="restrict to these ids")
    r.add_argument("--nmax-a", type=int, default=None, help="bound for plain families")
    r.add_argument("--nmax-b", type=int, default=None, help="bound for signed families")
    common(r, formats=("json",))
    return p


COMMANDS = {"verify": cmd_verify, "table": cmd_table, "gamma": cmd_gamma, "tree": cmd_tree, "report": cmd_report}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if getattr(args, "jobs", 1) < 1:
        parser.print_usage(sys.stderr)
        sys.stderr.write("error: --jobs must be positive\n")
        return EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
