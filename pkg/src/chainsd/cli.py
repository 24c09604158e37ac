"""Command-line front end: ``chainsd ring-info | count | verify | construct``.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 existence or precondition failure.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from importlib import metadata
from pathlib import Path

import click

from .chain_ring import PRESET_SPECS, ChainRing, InvalidRingSpec, preset
from .codes import CodeChain, LinearCodeT, check_chain_conditions, type_feasible
from .enumeration import (
    ChainConditionError,
    CountContext,
    FormulaInapplicable,
    count_sd_type,
    count_so_type,
    count_with_torsion_chain,
    is_symmetric_type,
    iter_types,
    s_theta_case,
)
from .lift import ExistenceFailure, LiftError, WrongMode, construct, sample_construction
from .oracle import CensusTooLarge, DEFAULT_ENUMERATE_LIMIT, census_estimate, iter_so_flags, so_summary

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_EXISTENCE = 3


class InputError(click.ClickException):
    exit_code = EXIT_INPUT


class ExistenceError(click.ClickException):
    exit_code = EXIT_EXISTENCE


def load_ring(text: str) -> ChainRing:
    """A preset name (R41, F2u2, ...) or a path to a ring spec JSON file."""
    if text in PRESET_SPECS:
        return preset(text)
    p = Path(text)
    if not p.exists():
        raise InputError(f"no preset or file named {text!r} (presets: {', '.join(sorted(PRESET_SPECS))})")
    try:
        return ChainRing.from_json(p)
    except (InvalidRingSpec, ValueError, json.JSONDecodeError) as exc:
        raise InputError(f"invalid ring spec {text}: {exc}") from exc


def parse_type(text: str, e: int) -> tuple[int, ...]:
    try:
        lam = tuple(int(x) for x in text.replace(" ", "").split(","))
    except ValueError:
        raise InputError(f"type must be comma-separated integers, got {text!r}") from None
    if len(lam) != e or any(x < 0 for x in lam):
        raise InputError(f"type needs {e} non-negative entries")
    return lam


def fmt_type(lam) -> str:
    return ",".join(map(str, lam))


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "dev"


def write_manifest(path: str | None, command: str, ring: ChainRing, params: dict, seed, started: float, result: str) -> None:
    if not path:
        return
    manifest = {
        "command": command,
        "ring": ring.to_json(),
        "parameters": params,
        "seed": seed,
        "version": _version(),
        "seconds": round(time.time() - started, 3),
        "digest": hashlib.sha256(result.encode()).hexdigest(),
    }
    Path(path).write_text(json.dumps(manifest, indent=2) + "\n")


def emit(text: str) -> str:
    click.echo(text, nl=False)
    return text


ring_opt = click.option("--ring", "ring_name", required=True, help="Preset name or ring spec JSON file.")
manifest_opt = click.option("--manifest", type=click.Path(dir_okay=False), default=None, help="Write a run manifest here.")


@click.group()
@click.version_option(_version(), prog_name="chainsd")
def main() -> None:
    """Self-orthogonal and self-dual codes over chain rings of even characteristic."""


@main.command("ring-info")
@ring_opt
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@manifest_opt
def ring_info(ring_name: str, fmt: str, manifest: str | None) -> None:
    """Structure constants of a chain ring."""
    t0 = time.time()
    ring = load_ring(ring_name)
    info = ring.info()
    if fmt == "json":
        out = json.dumps(info, indent=2) + "\n"
    else:
        eta = info["eta"]
        lines = [
            info["presentation"],
            f"e={info['e']} kappa={info['kappa']} s={info['s']} kappa1={info['kappa1']} theta_e={info['theta_e']}",
            f"|R|={info['size']}",
            f"2 = {info['two']}",
            f"eta = {'(' + ','.join(eta) + ')' if eta is not None else 'undefined (s = 1)'}",
            "Teichmuller digits: " + ", ".join(f"{k}->{v}" for k, v in info["teichmuller"].items()),
            "|<u^i>| = " + " ".join(str(x) for x in info["ideal_sizes"]),
        ]
        out = "\n".join(lines) + "\n"
    write_manifest(manifest, "ring-info", ring, {}, None, t0, emit(out))


def _count_row(ring: ChainRing, n: int, lam, self_dual: bool) -> dict:
    row = {"type": fmt_type(lam)}
    if not type_feasible(n, lam, ring.e):
        row.update(count=0, note="infeasible (torsion containment bound)")
        return row
    ctx = CountContext(ring, n, tuple(lam))
    try:
        if self_dual:
            row["count"] = count_sd_type(ctx) if is_symmetric_type(n, lam) else 0
        else:
            row["count"] = count_so_type(ctx)
    except FormulaInapplicable as exc:
        raise InputError(f"no formula applies: {exc}") from exc
    return row


def render(rows: list[dict], fmt: str, ring: ChainRing, n: int) -> str:
    if fmt == "json":
        return json.dumps({"ring": ring.presentation(), "n": n, "rows": rows}, indent=2) + "\n"
    buf = io.StringIO()
    cols = ["type", "count"] + (["note"] if any("note" in r for r in rows) else [])
    buf.write(f"# ring: {ring.presentation()}, n={n}\n")
    w = csv.DictWriter(buf, fieldnames=cols, extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


@main.command()
@ring_opt
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--type", "type_", default=None, help="Comma-separated type, e.g. 0,0,0,2.")
@click.option("--all", "all_", is_flag=True, help="Every feasible type plus a total row.")
@click.option("--self-dual", is_flag=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv")
@manifest_opt
def count(ring_name, n, type_, all_, self_dual, fmt, manifest) -> None:
    """Closed-form numbers of self-orthogonal (or self-dual) codes."""
    t0 = time.time()
    ring = load_ring(ring_name)
    if ring.kappa % 2:
        raise InputError("counting formulas need an even kappa")
    if bool(type_) == bool(all_):
        raise InputError("give exactly one of --type and --all")
    if type_:
        rows = [_count_row(ring, n, parse_type(type_, ring.e), self_dual)]
    else:
        rows = [_count_row(ring, n, lam, self_dual) for lam in iter_types(n, ring.e)]
        rows.append({"type": "total", "count": sum(r["count"] for r in rows)})
    out = render(rows, fmt, ring, n)
    write_manifest(manifest, "count", ring, {"n": n, "type": type_, "all": all_, "self_dual": self_dual}, None, t0, emit(out))


def _formula_pair(args):
    ring, n, lam = args
    ctx = CountContext(ring, n, lam)
    case = None
    try:
        case = s_theta_case(ctx)
    except FormulaInapplicable:
        pass
    return lam, count_so_type(ctx), count_sd_type(ctx) if is_symmetric_type(n, lam) else 0, case


def verify_report(ring: ChainRing, n: int, jobs: int = 1, limit: int | None = DEFAULT_ENUMERATE_LIMIT) -> dict:
    """Per-type SO/SD counts from the formulas against the census."""
    if limit is not None and census_estimate(ring, n) > limit:
        raise CensusTooLarge(f"census over R^{n} beyond the enumeration limit")
    census = so_summary(ring, n)
    types = [lam for lam in iter_types(n, ring.e) if any(lam)]
    args = [(ring, n, lam) for lam in types]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_formula_pair, args))
    else:
        results = [_formula_pair(a) for a in args]
    mismatches = []
    for lam, so, sd, case in results:
        o_so, o_sd = census.so.get(lam, 0), census.sd.get(lam, 0)
        if so != o_so or sd != o_sd:
            mismatches.append({"type": fmt_type(lam), "formula_so": so, "oracle_so": o_so, "formula_sd": sd, "oracle_sd": o_sd, "s_theta_case": case})
    return {"n": n, "types": len(types), "mismatches": mismatches, "total_so": census.total_so, "total_sd": census.total_sd}


@main.command()
@ring_opt
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--jobs", type=click.IntRange(min=1), default=1, help="Worker processes for the formula side.")
@click.option("--enumerate-limit", type=click.IntRange(min=1), default=DEFAULT_ENUMERATE_LIMIT)
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text")
@manifest_opt
def verify(ring_name, n, jobs, enumerate_limit, fmt, manifest) -> None:
    """Compare every per-type formula count with the brute-force census."""
    t0 = time.time()
    ring = load_ring(ring_name)
    try:
        rep = verify_report(ring, n, jobs, enumerate_limit)
    except CensusTooLarge as exc:
        raise InputError(str(exc)) from exc
    ok = not rep["mismatches"]
    if fmt == "json":
        out = json.dumps({**rep, "status": "PASS" if ok else "FAIL"}, indent=2) + "\n"
    else:
        lines = [f"{'PASS' if ok else 'FAIL'}: {rep['types']} types compared (n={n}, SO total {rep['total_so']}, SD total {rep['total_sd']})"]
        for m in rep["mismatches"]:
            lines.append(
                f"  type {m['type']}: SO formula {m['formula_so']} vs census {m['oracle_so']}; "
                f"SD formula {m['formula_sd']} vs census {m['oracle_sd']}; case {m['s_theta_case']}"
            )
        out = "\n".join(lines) + "\n"
    write_manifest(manifest, "verify", ring, {"n": n}, None, t0, emit(out))
    if not ok:
        sys.exit(EXIT_MISMATCH)


def _load_chain(path: str, ring: ChainRing, n: int, lam) -> CodeChain:
    try:
        obj = json.loads(Path(path).read_text())
        spaces = obj["spaces"] if isinstance(obj, dict) else obj
        members = tuple(LinearCodeT.span(ring.field, [tuple(v) for v in basis], n) for basis in spaces)
        return CodeChain(ring, n, members, lam)
    except (OSError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"invalid chain file {path}: {exc}") from exc


def pick_random_chain(ring: ChainRing, n: int, lam, rng: random.Random) -> CodeChain:
    top = ring.s + ring.theta
    dims = [sum(lam[: i + 1]) for i in range(top)]
    good = [CodeChain(ring, n, fl, lam) for fl in iter_so_flags(ring.field, n, dims)]
    good = [c for c in good if check_chain_conditions(c).ok]
    if not good:
        raise ExistenceError("no admissible chain of this type")
    return rng.choice(good)


@main.command("construct")
@ring_opt
@click.option("--n", "n", type=click.IntRange(min=1), required=True)
@click.option("--type", "type_", required=True)
@click.option("--chain", "chain_file", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--random-chain", is_flag=True)
@click.option("--seed", type=int, default=0)
@click.option("--mode", type=click.Choice(["X", "Y"]), default=None)
@click.option("--enumerate", "enum", is_flag=True, help="Emit every distinct code lifting the chain.")
@click.option("--enumerate-limit", type=click.IntRange(min=1), default=10_000)
@click.option("--skip-chain-check", is_flag=True, help="Let the solver, not the admissibility test, reject a bad chain.")
@manifest_opt
def construct_cmd(ring_name, n, type_, chain_file, random_chain, seed, mode, enum, enumerate_limit, skip_chain_check, manifest) -> None:
    """Lift a chain of self-orthogonal residue codes to a code over the ring."""
    t0 = time.time()
    ring = load_ring(ring_name)
    lam = parse_type(type_, ring.e)
    if bool(chain_file) == bool(random_chain):
        raise InputError("give exactly one of --chain and --random-chain")
    rng = random.Random(seed)
    chain = _load_chain(chain_file, ring, n, lam) if chain_file else pick_random_chain(ring, n, lam, rng)
    chain_json = [[list(v) for v in D.basis] for D in chain.spaces]
    try:
        if enum:
            codes = list(construct(chain, mode, "enumerate", limit=enumerate_limit))
            result = {
                "type": list(lam),
                "chain": chain_json,
                "count": len(codes),
                "expected": count_with_torsion_chain(chain),
                "codes": [c.to_json() for c in codes],
            }
        else:
            res = sample_construction(chain, mode, seed, check=not skip_chain_check)
            result = {
                "type": list(lam),
                "chain": chain_json,
                "steps": res.steps,
                "code": res.code.to_json(),
                "certificate": res.certificate,
            }
    except ChainConditionError as exc:
        raise ExistenceError(f"chain condition failed: {', '.join(exc.failed)}") from exc
    except ExistenceFailure as exc:
        extra = f" (violated: {', '.join(exc.clauses)})" if exc.clauses else ""
        raise ExistenceError(f"{exc}{extra}") from exc
    except (WrongMode, ValueError) as exc:
        raise InputError(str(exc)) from exc
    except LiftError as exc:
        raise ExistenceError(str(exc)) from exc
    out = json.dumps(result, indent=2) + "\n"
    write_manifest(manifest, "construct", ring, {"n": n, "type": list(lam), "enumerate": enum}, seed, t0, emit(out))


if __name__ == "__main__":
    main()
