"""Command-line front end: distribution tables, simulations, verifications.

Commands
--------
dist      exact remaining-ball table for one game (rules p2, iii, iv)
simulate  seeded Monte Carlo run reported against the exact law
verify    machine checks: operator residuals, oracle sweeps, identities,
          generating-function equalities
argmax    the set of most likely leftover counts
asym      leading asymptotic value beside the exact one

Every command takes --format {json,csv,plot} and --out PATH.  JSON output
is one object {command, params, rows, status} with exact probabilities as
decimal num/den strings; CSV holds the same rows; plot is a bare numeric
table (k, exact[, empirical]).  A one-line human summary goes to stderr.

Exit status: 0 on success, 1 when a verification or tolerance check
failed, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .closed_form import (
    Regime,
    Rule,
    UnsupportedRule,
    UrnSpec,
    argmax_rule3,
    argmax_rule4,
    asym_rule3,
    asym_rule4,
    gen_fn_p2,
    gen_fn_rule3,
    gen_fn_rule4,
    p2,
    p3_last_white,
    p_rule3,
    p_rule4,
    pmf,
)
from .combinatorics import binomial, falling_ratio
from .oracles import dp_eval, g_recursion, p_rule3_via_g
from .series import (
    WindowTooSmall,
    normalization_from_unit_identity,
    verify_identity_3F2_unit,
    verify_identity_C1,
    verify_identity_bio2,
    verify_pde,
)
from .simulate import simulate

__all__ = ["DEV_TOLERANCE", "OutputRecord", "main"]

#: Largest allowed simulated-vs-exact deviation at report time.
DEV_TOLERANCE = 0.005

#: Hard caps on verify sweep bounds (runtime guard rails).
_MAXIMA = {"kmax": 6, "order": 14, "rmax": 40, "wmax": 40, "max": 30}

_GENFN_POINTS = (Fraction(0), Fraction(1), Fraction(1, 2), Fraction(-1), Fraction(2))


class UsageError(Exception):
    """Bad command-line inputs; mapped to exit status 2."""


@dataclass
class OutputRecord:
    command: str
    params: dict
    rows: list[dict]
    status: str = "OK"

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "params": self.params,
            "rows": self.rows,
            "status": self.status,
        }


def _frac_fields(value: Fraction, prefix: str = "exact") -> dict:
    return {
        f"{prefix}_num": str(value.numerator),
        f"{prefix}_den": str(value.denominator),
        f"{prefix}_float": float(value),
    }


def _argmax_set(rule: Rule, r: int, w: int) -> set[int]:
    return argmax_rule3(r, w) if rule is Rule.III else argmax_rule4(r, w)


def cmd_dist(rule: Rule, r: int, w: int) -> OutputRecord:
    dist = pmf(UrnSpec(r, w, rule))
    rows = [dict(k=k, **_frac_fields(p)) for k, p in enumerate(dist.probs)]
    normalized = sum(dist.probs) == 1
    params = {
        "rule": rule.value,
        "r": r,
        "w": w,
        "argmax": sorted(dist.argmax_set()),
        "normalized": normalized,
    }
    return OutputRecord("dist", params, rows, "OK" if normalized else "FAIL")


def cmd_simulate(
    rule: Rule, r: int, w: int, trials: int, seed: int, streams: int
) -> OutputRecord:
    spec = UrnSpec(r, w, rule)
    report = simulate(spec, trials, seed, streams)
    params = {
        "rule": rule.value,
        "trials": trials,
        "seed": seed,
        "streams": streams,
        "stream_rule": report.stream_rule,
        "max_abs_dev": report.max_abs_dev,
        "tolerance": DEV_TOLERANCE,
    }
    if rule is Rule.P4:
        params.update({"m": r, "n": w})
    else:
        params.update({"r": r, "w": w})
    if rule in (Rule.P3, Rule.P4):
        event = "last_ball_white" if rule is Rule.P3 else "last_ball_black"
        rows = [
            dict(
                event=event,
                **_frac_fields(_exact_scalar(spec)),
                empirical=report.empirical[0],
                deviation=abs(report.empirical[0] - report.exact[0]),
            )
        ]
    else:
        exact_probs = pmf(spec).probs
        rows = [
            dict(
                k=k,
                **_frac_fields(exact_probs[k]),
                empirical=report.empirical[k],
                deviation=abs(report.empirical[k] - report.exact[k]),
            )
            for k in range(len(exact_probs))
        ]
    status = "OK" if report.max_abs_dev < DEV_TOLERANCE else "FAIL"
    return OutputRecord("simulate", params, rows, status)


def _exact_scalar(spec: UrnSpec) -> Fraction:
    if spec.rule is Rule.P3:
        return p3_last_white(spec.r, spec.w)
    return Fraction(1, 2)


def cmd_argmax(rule: Rule, r: int, w: int) -> OutputRecord:
    ks = _argmax_set(rule, r, w)
    params = {"rule": rule.value, "r": r, "w": w}
    return OutputRecord("argmax", params, [{"k": k} for k in sorted(ks)])


def cmd_asym(rule: Rule, regime: Regime, r: int, w: int, k: int) -> OutputRecord:
    if rule is Rule.III:
        approx, exact = asym_rule3(r, w, k, regime), p_rule3(r, w, k)
    else:
        approx, exact = asym_rule4(r, w, k, regime), p_rule4(r, w, k)
    rel_err = float(abs(approx / exact - 1)) if exact else None
    row = dict(k=k)
    row.update(_frac_fields(approx, "asym"))
    row.update(_frac_fields(exact, "exact"))
    row["rel_err"] = rel_err
    params = {"rule": rule.value, "regime": regime.value, "r": r, "w": w, "k": k}
    return OutputRecord("asym", params, [row])


def _row(check: str, ok: bool, detail: str = "") -> dict:
    return {"check": check, "status": "OK" if ok else "FAIL", "detail": detail}


def _verify_pde_rows(kmax: int, order: int) -> list[dict]:
    rows = []
    for rule in (Rule.III, Rule.IV):
        for k in range(kmax + 1):
            report = verify_pde(rule, k, order)
            detail = "" if report.passed else report.summary()
            rows.append(_row(f"pde:{rule.value}:k={k}", report.passed, detail))
    return rows


_CLOSED_FORM = {Rule.P2: p2, Rule.III: p_rule3, Rule.IV: p_rule4}


def _verify_oracles_rows(rmax: int, wmax: int) -> list[dict]:
    rows = []
    for rule, fn in _CLOSED_FORM.items():
        first_bad = ""
        kmax = rmax if rule is Rule.IV else wmax
        for k in range(kmax + 1):
            table = dp_eval(rule, k, rmax, wmax)
            for r in range(rmax + 1):
                for w in range(wmax + 1):
                    if table.value(r, w) != fn(r, w, k):
                        first_bad = (
                            f"k={k} r={r} w={w}: dp={table.value(r, w)} "
                            f"closed={fn(r, w, k)}"
                        )
                        break
                if first_bad:
                    break
            if first_bad:
                break
        rows.append(_row(f"oracle:dp:{rule.value}", not first_bad, first_bad))

    first_bad = ""
    for k in range(11):
        for r in range(1, 21):
            for s in range(21):
                closed = binomial(r + s - 1, s) * falling_ratio(r + s + k + 1, r + k + 1)
                if g_recursion(k, r, s) != closed:
                    first_bad = f"k={k} r={r} s={s}"
                    break
            if first_bad:
                break
        if first_bad:
            break
    rows.append(_row("oracle:g-closed-form", not first_bad, first_bad))

    first_bad = ""
    for r in range(1, min(rmax, 20) + 1):
        for w in range(min(wmax, 20) + 1):
            for k in range(w + 1):
                if p_rule3_via_g(r, w, k) != p_rule3(r, w, k):
                    first_bad = f"r={r} w={w} k={k}"
                    break
            if first_bad:
                break
        if first_bad:
            break
    rows.append(_row("oracle:assembly-via-g", not first_bad, first_bad))
    return rows


def _verify_identities_rows(bound: int) -> list[dict]:
    rows = []
    bad = next(
        (
            f"r={r} w={w}"
            for r in range(1, bound + 1)
            for w in range(1, bound + 1)
            if not verify_identity_C1(r, w)
        ),
        "",
    )
    rows.append(_row("identity:alternating-binomial", not bad, bad))
    bad = next(
        (
            f"r={r} w={w}"
            for r in range(1, bound + 1)
            for w in range(1, bound + 1)
            if not verify_identity_bio2(r, w)
        ),
        "",
    )
    rows.append(_row("identity:companion-binomial", not bad, bad))
    bad = ""
    for r in range(1, min(bound, 15) + 1):
        for w in range(1, min(bound, 15) + 1):
            total = sum(p_rule3(r, w, k) for k in range(w + 1))
            if not (
                verify_identity_3F2_unit(1, 1, w, 2 + r)
                and normalization_from_unit_identity(r, w) == 1
                and total == 1
            ):
                bad = f"r={r} w={w}"
                break
        if bad:
            break
    rows.append(_row("identity:unit-3f2-normalization", not bad, bad))
    return rows


def _verify_genfn_rows(rmax: int, wmax: int) -> list[dict]:
    cases = (
        ("genfn:p2", gen_fn_p2, Rule.P2),
        ("genfn:iii", gen_fn_rule3, Rule.III),
        ("genfn:iv", gen_fn_rule4, Rule.IV),
    )
    rows = []
    for name, gen, rule in cases:
        bad = ""
        for r in range(1, rmax + 1):
            for w in range(1, wmax + 1):
                probs = pmf(UrnSpec(r, w, rule)).probs
                for z in _GENFN_POINTS:
                    direct = sum(p * z**k for k, p in enumerate(probs))
                    if gen(r, w, z) != direct:
                        bad = f"r={r} w={w} z={z}"
                        break
                if bad:
                    break
            if bad:
                break
        rows.append(_row(name, not bad, bad))
    return rows


def cmd_verify(target: str, bounds: dict) -> OutputRecord:
    rows: list[dict] = []
    if target in ("pde", "all"):
        rows += _verify_pde_rows(bounds["kmax"], bounds["order"])
    if target in ("oracles", "all"):
        rows += _verify_oracles_rows(bounds["rmax"], bounds["wmax"])
    if target in ("identities", "all"):
        rows += _verify_identities_rows(bounds["max"])
    if target in ("genfn", "all"):
        rows += _verify_genfn_rows(min(bounds["rmax"], 20), min(bounds["wmax"], 20))
    ok = all(row["status"] == "OK" for row in rows)
    params = {"target": target, **bounds}
    return OutputRecord("verify", params, rows, "OK" if ok else "FAIL")


def _render(record: OutputRecord, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(record.to_dict(), sort_keys=True) + "\n"
    if fmt == "csv":
        if not record.rows:
            return ""
        buf = io.StringIO()
        writer = csv.DictWriter(
            buf, fieldnames=list(record.rows[0].keys()), lineterminator="\n"
        )
        writer.writeheader()
        writer.writerows(record.rows)
        return buf.getvalue()
    if fmt == "plot":
        if record.command not in ("dist", "simulate") or any(
            "k" not in row for row in record.rows
        ):
            raise UsageError("--format plot is only available for dist/simulate tables")
        lines = []
        for row in record.rows:
            cols = [str(row["k"]), repr(row["exact_float"])]
            if "empirical" in row:
                cols.append(repr(row["empirical"]))
            lines.append(" ".join(cols))
        return "\n".join(lines) + "\n"
    raise UsageError(f"unknown format {fmt!r}")


def _summary_line(record: OutputRecord) -> str:
    if record.command == "dist":
        return (
            f"dist: argmax={record.params['argmax']} "
            f"normalized={'exact' if record.params['normalized'] else 'BROKEN'} "
            f"status={record.status}"
        )
    if record.command == "simulate":
        return (
            f"simulate: max_abs_dev={record.params['max_abs_dev']:.6f} "
            f"tolerance={record.params['tolerance']} status={record.status}"
        )
    if record.command == "verify":
        failed = [row["check"] for row in record.rows if row["status"] != "OK"]
        head = f"verify: {len(record.rows)} checks, {len(failed)} failed"
        return head if not failed else head + " -> " + ", ".join(failed)
    return f"{record.command}: status={record.status}"


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--format", choices=("json", "csv", "plot"), default="json")
    parser.add_argument("--out", metavar="PATH", help="write output here, not stdout")
    parser.add_argument("--seed", type=int, default=0, help="RNG seed (simulate)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="urngames",
        description="Exact urn-game distributions, simulations and verifications.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_dist = sub.add_parser("dist", help="exact distribution table over k")
    p_dist.add_argument("--rule", required=True, choices=("p2", "iii", "iv"))
    p_dist.add_argument("--r", type=int, required=True)
    p_dist.add_argument("--w", type=int, required=True)
    _add_common(p_dist)

    p_sim = sub.add_parser("simulate", help="seeded Monte Carlo vs exact law")
    p_sim.add_argument("--rule", required=True, choices=("p2", "p3", "iii", "iv", "p4"))
    p_sim.add_argument("--r", type=int)
    p_sim.add_argument("--w", type=int)
    p_sim.add_argument("--m", type=int, help="black balls (rule p4)")
    p_sim.add_argument("--n", type=int, help="white balls (rule p4)")
    p_sim.add_argument("--trials", type=int, required=True)
    p_sim.add_argument("--streams", type=int, default=1)
    _add_common(p_sim)

    p_ver = sub.add_parser("verify", help="run machine verification suites")
    p_ver.add_argument(
        "target", choices=("pde", "oracles", "identities", "genfn", "all")
    )
    p_ver.add_argument("--kmax", type=int, default=4, help="max k (pde), <= 6")
    p_ver.add_argument("--order", type=int, default=10, help="series order, <= 14")
    p_ver.add_argument("--rmax", type=int, default=30, help="sweep bound, <= 40")
    p_ver.add_argument("--wmax", type=int, default=30, help="sweep bound, <= 40")
    p_ver.add_argument("--max", type=int, default=25, help="identity grid, <= 30")
    _add_common(p_ver)

    p_arg = sub.add_parser("argmax", help="most likely leftover counts")
    p_arg.add_argument("--rule", required=True, choices=("iii", "iv"))
    p_arg.add_argument("--r", type=int, required=True)
    p_arg.add_argument("--w", type=int, required=True)
    _add_common(p_arg)

    p_asym = sub.add_parser("asym", help="asymptotic value beside the exact one")
    p_asym.add_argument("--rule", required=True, choices=("iii", "iv"))
    p_asym.add_argument("--regime", required=True, choices=("large-r", "large-w"))
    p_asym.add_argument("--r", type=int, required=True)
    p_asym.add_argument("--w", type=int, required=True)
    p_asym.add_argument("--k", type=int, required=True)
    _add_common(p_asym)
    return parser


def _dispatch(args: argparse.Namespace) -> OutputRecord:
    if args.command == "dist":
        return cmd_dist(Rule(args.rule), args.r, args.w)
    if args.command == "simulate":
        rule = Rule(args.rule)
        if rule is Rule.P4:
            if args.m is None or args.n is None:
                raise UsageError("rule p4 needs --m and --n")
            r, w = args.m, args.n
        else:
            if args.r is None or args.w is None:
                raise UsageError(f"rule {rule.value} needs --r and --w")
            r, w = args.r, args.w
        return cmd_simulate(rule, r, w, args.trials, args.seed, args.streams)
    if args.command == "verify":
        bounds = {
            key: getattr(args, key) for key in ("kmax", "order", "rmax", "wmax", "max")
        }
        for key, value in bounds.items():
            if value < 0 or value > _MAXIMA[key]:
                raise UsageError(
                    f"--{key} must be between 0 and {_MAXIMA[key]} (got {value})"
                )
        return cmd_verify(args.target, bounds)
    if args.command == "argmax":
        return cmd_argmax(Rule(args.rule), args.r, args.w)
    if args.command == "asym":
        return cmd_asym(Rule(args.rule), Regime(args.regime), args.r, args.w, args.k)
    raise UsageError(f"unknown command {args.command!r}")


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        record = _dispatch(args)
        payload = _render(record, args.format)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (WindowTooSmall, UnsupportedRule, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as handle:
            handle.write(payload)
    else:
        sys.stdout.write(payload)
    print(_summary_line(record), file=sys.stderr)
    return 0 if record.status == "OK" else 1


if __name__ == "__main__":
    sys.exit(main())
