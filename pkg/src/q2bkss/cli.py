"""Command-line interface.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 truncation did not stabilize.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import connecting, spectral, verify
from .bring import NonStabilizationError
from .chart import render_svg

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2, 3


class UsageError(Exception):
    pass


def default_trunc() -> int:
    raw = os.environ.get("Q2BKSS_TRUNC", "24")
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"Q2BKSS_TRUNC must be an integer, got {raw!r}") from None


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=str) + "\n"


def _check_range(args):
    if args.t_min > args.t_max:
        raise UsageError(f"--t-min {args.t_min} exceeds --t-max {args.t_max}")
    if args.trunc < 8:
        raise UsageError("--trunc must be at least 8 for E2 computations")


def cmd_e2(args) -> int:
    _check_range(args)
    direct = spectral.e2_direct(args.t_min, args.t_max, args.trunc, args.jobs)
    filt = spectral.e2_filtration(args.t_min, args.t_max, args.trunc, args.jobs)
    cc = spectral.cross_check(args.t_min, args.t_max, args.trunc, pages=(direct, filt))
    if args.format == "svg":
        _emit(render_svg(filt, f"E2, internal t in [{args.t_min}, {args.t_max}], V={args.trunc}"), args.out)
    elif args.format == "json":
        _emit(_dump({
            "V": args.trunc,
            "direct": direct.to_json(),
            "filtration": filt.to_json(),
            "certificate": {"direct": direct.notes.get("certificate"),
                            "filtration": filt.notes.get("certificate")},
            "crossCheck": cc.to_json(),
        }), args.out)
    else:
        lines = [f"E2 page, V={args.trunc} (internal degrees)"]
        for t in range(args.t_min, args.t_max + 1):
            for s in range(3):
                mod = filt.get(s, t)
                if not mod.is_zero():
                    lines.append(f"  E2^({s},{t}) = {mod.summary()}")
        lines.append(f"cross-check: {'ok' if cc.ok else 'FAILED'}")
        for r in cc.failures():
            lines.append(f"  mismatch at (s={r.s}, t={r.t}): {r.detail}")
        for t, u in sorted(cc.resolved_u.items()):
            lines.append(f"  U^{t} = {u}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if cc.ok else EXIT_FAIL


def cmd_chart(args) -> int:
    _check_range(args)
    page = spectral.e2_filtration(args.t_min, args.t_max, args.trunc, args.jobs)
    _emit(render_svg(page, f"E2, internal t in [{args.t_min}, {args.t_max}], V={args.trunc}"), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.suite not in list(verify.SUITES) + ["all"]:
        raise UsageError(f"unknown suite {args.suite!r}")
    kw = {"V": args.trunc} if args.trunc_given else {}
    if args.t_given:
        kw.update(t_min=args.t_min, t_max=args.t_max)
    kw["jobs"] = args.jobs
    checks = verify.run(args.suite, **kw)
    ok = all(c.ok for c in checks)
    if args.format == "json":
        _emit(_dump({"ok": ok, "checks": [c.to_json() for c in checks]}), args.out)
    else:
        lines = [f"[{'PASS' if c.ok else 'FAIL'}] {c.suite}: {c.name}" + (f" -- {c.detail}" if c.detail else "")
                 for c in checks]
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_delta(args) -> int:
    if args.eps not in (0, 1) or args.m is None:
        raise UsageError("--eps must be 0 or 1 and --m is required")
    if args.eps == 0 and args.m == 0:
        ker, coker = connecting.delta0_ker_coker(args.trunc)
        payload = {"kernel": ker.to_json(), "cokernel": coker.to_json()}
        text = f"delta0 in degree 0: ker = {ker.summary()}, coker = {coker.summary()}\n"
        if args.show == "matrix":
            M = connecting.delta0_matrix(args.trunc)
            payload = M.to_json()
            text = _matrix_text(M.row_labels, M.col_labels, M.entries)
        _emit(_dump(payload) if args.format == "json" else text, args.out)
        return EXIT_OK
    C = connecting.connecting_matrix(args.eps, args.m, args.trunc)
    if args.show == "matrix":
        R = C.residues()
        payload = C.to_json()
        text = f"modulus 3^{C.k}\n" + _matrix_text([r.label() for r in C.rows],
                                                   [c.label() for c in C.columns], R.entries)
    elif args.show == "leading":
        rows = []
        for v in range(args.trunc + 1):
            pred = connecting.leading_term(args.eps, args.m, v)
            obs = connecting.observed_leading(args.eps, args.m, v)
            rows.append({"v": v, "predicted": str(pred), "observed": None if obs is None else obs[0]})
        payload = rows
        text = "".join(f"v={r['v']}: predicted {r['predicted']}, observed {r['observed']}\n" for r in rows)
    else:
        rep = connecting.case_analysis(args.eps, args.m, args.trunc)
        payload = rep.to_json()
        if args.show == "kernel":
            text = f"case {rep.case}: ker = {rep.kernel_computed.summary()}\n"
            text += "  closed form: " + ", ".join(
                f"{g} ({'free' if k is None else f'Z/{3**k}'})"
                for g, k in zip(rep.kernel_closed.generators, rep.kernel_closed.orders)
            ) + "\n"
            if "U" in rep.extra:
                text += f"  split: K'' = {rep.extra['K2'].summary()}, U = {rep.extra['U'].summary()}\n"
        elif args.show == "cokernel":
            text = f"case {rep.case}: coker = {rep.coker_computed.summary()}\n"
            text += f"  closed form: {rep.coker_closed.summary()}\n"
        else:
            text = (f"case {rep.case}: match={rep.match}\n  ker = {rep.kernel_computed.summary()}\n"
                    f"  coker = {rep.coker_computed.summary()}\n")
            for n in rep.notes:
                text += f"  note: {n}\n"
        if not rep.match:
            _emit(_dump(payload) if args.format == "json" else text, args.out)
            return EXIT_FAIL
    _emit(_dump(payload) if args.format == "json" else text, args.out)
    return EXIT_OK


def _matrix_text(rows, cols, entries) -> str:
    lines = ["\t" + "\t".join(str(c) for c in cols)]
    for r, lab in enumerate(rows):
        lines.append(str(lab) + "\t" + "\t".join(str(entries.get((r, c), 0)) for c in range(len(cols))))
    return "\n".join(lines) + "\n"


def cmd_resolve_u(args) -> int:
    if args.m is None:
        raise UsageError("--m is required")
    if not connecting.is_case5(1, args.m):
        raise UsageError(f"m={args.m} is not a positive integer congruent to 13 mod 27")
    res = connecting.resolve_u(args.m, args.trunc)
    if args.format == "json":
        _emit(_dump(res.to_json()), args.out)
    else:
        lines = [f"U^{4 * args.m + 2} = {res.U.summary()}  (V={args.trunc}, stable against V+4)"]
        for g, k in zip(res.U.generators, res.U.orders):
            lines.append(f"  Z/{3**k}: {g}")
        lines.append(f"ker delta1 = K'' + U = {res.kernel.summary()}, K'' = {res.K2.summary()}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="q2bkss", description="Exact E2-term of the Bousfield-Kan spectral sequence for Q(2) at p=3")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, fmt=("text", "json")):
        sp.add_argument("--trunc", type=int, default=None, help="truncation V (default $Q2BKSS_TRUNC or 24)")
        sp.add_argument("--format", choices=fmt, default="text")
        sp.add_argument("--out", default=None)
        sp.add_argument("--jobs", type=int, default=1)

    def window(sp, lo=-24, hi=24):
        sp.add_argument("--t-min", type=int, default=None)
        sp.add_argument("--t-max", type=int, default=None)
        sp.set_defaults(t_default=(lo, hi))

    sp = sub.add_parser("e2", help="compute the E2 page and cross-check")
    common(sp, ("text", "json", "svg"))
    window(sp)
    sp.set_defaults(func=cmd_e2)

    sp = sub.add_parser("chart", help="SVG chart of the E2 page")
    common(sp, ("svg",))
    window(sp)
    sp.set_defaults(func=cmd_chart)

    sp = sub.add_parser("verify", help="run invariant suites")
    common(sp)
    window(sp)
    sp.add_argument("--suite", default="all")
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("delta", help="connecting map in one sector")
    common(sp)
    sp.add_argument("--eps", type=int, default=0)
    sp.add_argument("--m", type=int, default=None)
    sp.add_argument("--show", choices=("matrix", "kernel", "cokernel", "case", "leading"), default="case")
    sp.set_defaults(func=cmd_delta)

    sp = sub.add_parser("resolve-u", help="compute U^{4m+2} for m = 13 mod 27")
    common(sp)
    sp.add_argument("--m", type=int, default=None)
    sp.set_defaults(func=cmd_resolve_u)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        args.trunc_given = args.trunc is not None
        if args.trunc is None:
            args.trunc = default_trunc()
        if hasattr(args, "t_default"):
            args.t_given = args.t_min is not None or args.t_max is not None
            if args.t_min is None:
                args.t_min = args.t_default[0]
            if args.t_max is None:
                args.t_max = args.t_default[1]
        return args.func(args)
    except (UsageError, connecting.PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NonStabilizationError as exc:
        print(f"not stabilized: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE


if __name__ == "__main__":
    sys.exit(main())
