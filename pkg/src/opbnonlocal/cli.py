"""Command-line interface: ``opbnonlocal {list,verify,analyze,distinguish,batch}``."""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .instantiate import TOL, FamilyParams, Mode, instance_to_json, realize, sample_params, verify_opb
from .locc import first_round_triviality
from .opm_model import Opm, OpmError, catalog, expand_stars, get_opm, opm_from_json, parse_opm
from .structure import (
    decide_local_distinguishability,
    decompose,
    multiplicity_check,
    reducibility,
)
from .teleport import ebit_sweep

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_BUDGET = 4


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    opm: str | None = None
    file: str | None = None
    seed: int = 1
    overrides: dict[str, str] = field(default_factory=dict)
    tol: float = TOL
    out: str | None = None

    def __post_init__(self) -> None:
        if not (0 < self.tol < 1e-3):
            raise ConfigError(f"tolerance {self.tol} must be positive and below 1e-3")
        if (self.opm is None) == (self.file is None):
            raise ConfigError("give exactly one of an OPM name or --file")

    def echo(self) -> dict:
        return {
            "opm": self.opm,
            "file": self.file,
            "seed": self.seed,
            "set": dict(sorted(self.overrides.items())),
            "tol": self.tol,
        }

    def load_opm(self) -> Opm:
        if self.opm is not None:
            try:
                return get_opm(self.opm)
            except KeyError as exc:
                raise ConfigError(str(exc.args[0])) from None
        path = Path(self.file)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from None
        if path.suffix == ".json":
            return opm_from_json(json.loads(text))
        return parse_opm(text, name=path.stem)

    def instance(self):
        exp = expand_stars(self.load_opm())
        params = sample_params(exp, self.seed, parse_overrides(self.overrides, exp.families))
        return realize(exp, params, seed=self.seed, check=False)


def parse_override(value: str) -> FamilyParams:
    if value in ("deg0", "0"):
        return FamilyParams.degenerate(0)
    if value in ("deg1", "1"):
        return FamilyParams.degenerate(1)
    try:
        parts = [float(x) for x in value.split(",")]
    except ValueError:
        raise ConfigError(f"bad family setting {value!r}; use deg0, deg1 or theta,phi") from None
    if len(parts) not in (1, 2):
        raise ConfigError(f"bad family setting {value!r}; use deg0, deg1 or theta,phi")
    theta, phi = parts[0], parts[1] if len(parts) == 2 else 0.0
    try:
        return FamilyParams(theta, phi % (2 * math.pi), Mode.GENERIC)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def parse_overrides(raw: dict[str, str], families) -> dict[str, FamilyParams]:
    unknown = sorted(set(raw) - set(families))
    if unknown:
        raise ConfigError(f"no families {unknown} in this OPM (has {list(families)})")
    return {k: parse_override(v) for k, v in raw.items()}


def _split_set(items: list[str] | None) -> dict[str, str]:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"--set expects family=value, got {item!r}")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


# -- report sections ----------------------------------------------------------


def verify_section(inst, tol: float) -> dict:
    return verify_opb(inst, tol).to_json()


def analyze_section(inst, tol: float) -> dict:
    blocks = decompose(inst, tol)
    multiplicity = []
    for b in blocks:
        for j in range(inst.parties):
            multiplicity.append({"block": list(b.indices), **multiplicity_check(b, j, tol=tol).to_json()})
    verdict = decide_local_distinguishability(inst, tol)
    return {
        "reducibility": [reducibility(inst, j, tol=tol).to_json() for j in range(inst.parties)],
        "blocks": [b.to_json() for b in blocks],
        "multiplicity": multiplicity,
        "multiplicity_ok": all(x["ok"] for x in multiplicity),
        "first_round": first_round_triviality(inst, tol).to_json(),
        "distinguishability": verdict.to_json(),
    }


def distinguish_section(inst, budget: str, tol: float) -> dict:
    max_cost = 2 if budget == "auto" else int(budget)
    sweep = ebit_sweep(inst, max_cost=max_cost, tol=tol)
    out = {"budget": budget, "sweep": sweep.to_json()}
    if sweep.found:
        out["status"] = "certified"
        out["ledger"] = sweep.cost
        out["transcript"] = sweep.result.simulation.to_json()
    else:
        out["status"] = "not certified at this budget"
        out["ledger"] = None
    return out


def make_report(command: str, config: dict, results: dict, timings: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": "opbnonlocal", "version": __version__},
        "command": command,
        "config": config,
        "results": results,
        "timings": timings,
    }


def emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


# -- commands -----------------------------------------------------------------


def cmd_list(args) -> int:
    rows = []
    for name, opm in catalog().items():
        rows.append({
            "name": name,
            "parties": opm.parties,
            "display_rows": len(opm.rows),
            "expanded_rows": len(expand_stars(opm).rows),
            "families": opm.families,
        })
    if args.out:
        emit(make_report("list", {}, {"entries": rows}, {}), args.out)
    print(f"{'name':<6} {'parties':>7} {'display':>7} {'expanded':>8}  families")
    for r in rows:
        print(f"{r['name']:<6} {r['parties']:>7} {r['display_rows']:>7} {r['expanded_rows']:>8}  {' '.join(r['families'])}")
    return EXIT_OK


def _config(args) -> RunConfig:
    return RunConfig(
        opm=args.opm, file=args.file, seed=args.seed,
        overrides=_split_set(args.set), tol=args.tol, out=args.out,
    )


def cmd_verify(args) -> int:
    cfg = _config(args)
    t0 = time.perf_counter()
    inst = cfg.instance()
    results = {"verify": verify_section(inst, cfg.tol), "instance": instance_to_json(inst)}
    emit(make_report("verify", cfg.echo(), results, {"total_s": time.perf_counter() - t0}), cfg.out)
    ok = results["verify"]["orthogonal"] and results["verify"]["complete"]
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_analyze(args) -> int:
    cfg = _config(args)
    t0 = time.perf_counter()
    inst = cfg.instance()
    ver = verify_section(inst, cfg.tol)
    results = {"verify": ver}
    if ver["orthogonal"] and ver["complete"]:
        results["analysis"] = analyze_section(inst, cfg.tol)
    emit(make_report("analyze", cfg.echo(), results, {"total_s": time.perf_counter() - t0}), cfg.out)
    if "analysis" not in results or not results["analysis"]["multiplicity_ok"]:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_distinguish(args) -> int:
    cfg = _config(args)
    t0 = time.perf_counter()
    inst = cfg.instance()
    ver = verify_section(inst, cfg.tol)
    results = {"verify": ver}
    if ver["orthogonal"] and ver["complete"]:
        results["distinguish"] = distinguish_section(inst, args.ebits, cfg.tol)
    config = {**cfg.echo(), "ebits": args.ebits}
    emit(make_report("distinguish", config, results, {"total_s": time.perf_counter() - t0}), cfg.out)
    if "distinguish" not in results:
        return EXIT_VERIFY
    return EXIT_OK if results["distinguish"]["status"] == "certified" else EXIT_BUDGET


def _batch_one(job: tuple[str, int, float, bool]) -> dict:
    name, seed, tol, sweep = job
    cfg = RunConfig(opm=name, seed=seed, tol=tol)
    inst = cfg.instance()
    ver = verify_section(inst, tol)
    row = {"opm": name, "seed": seed, "verify_ok": ver["orthogonal"] and ver["complete"]}
    if row["verify_ok"]:
        an = analyze_section(inst, tol)
        row["multiplicity_ok"] = an["multiplicity_ok"]
        row["distinguishable"] = an["distinguishability"]["distinguishable"]
        row["reason"] = an["distinguishability"]["reason"]
        row["all_trivial"] = an["first_round"]["all_trivial"]
        if sweep:
            row["ebit_cost"] = ebit_sweep(inst, tol=tol).cost
    return row


def cmd_batch(args) -> int:
    names = list(catalog()) if args.all or not args.opm else args.opm
    jobs = [(n, s, args.tol, args.sweep) for n in names for s in range(args.seed, args.seed + args.seeds)]
    t0 = time.perf_counter()
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_batch_one, jobs))
    else:
        rows = [_batch_one(j) for j in jobs]
    summary = {
        "runs": len(rows),
        "verify_passes": sum(r["verify_ok"] for r in rows),
        "multiplicity_passes": sum(r.get("multiplicity_ok", False) for r in rows),
        "distinguishable": sorted({r["opm"] for r in rows if r.get("distinguishable") is True}),
        "indistinguishable": sorted({r["opm"] for r in rows if r.get("distinguishable") is False}),
        "unknown": sorted({r["opm"] for r in rows if r.get("distinguishable") is None and r["verify_ok"]}),
    }
    config = {"opms": names, "seed": args.seed, "seeds": args.seeds, "tol": args.tol, "sweep": args.sweep}
    emit(make_report("batch", config, {"summary": summary, "runs": rows}, {"total_s": time.perf_counter() - t0}), args.out)
    ok = summary["verify_passes"] == len(rows) and summary["multiplicity_passes"] == len(rows)
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="opbnonlocal", description="Local distinguishability of multiqubit orthogonal product bases")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list the OPM catalog")
    p.add_argument("--out", help="also write the table as JSON")
    p.set_defaults(func=cmd_list)

    def common(p):
        p.add_argument("opm", nargs="?", help="catalog name, e.g. M31")
        p.add_argument("--file", help="OPM text file (or .json export) instead of a catalog name")
        p.add_argument("--seed", type=int, default=1)
        p.add_argument("--set", action="append", metavar="FAMILY=VALUE",
                       help="deg0, deg1 or theta[,phi] for one variable family; repeatable")
        p.add_argument("--tol", type=float, default=TOL)
        p.add_argument("--out", help="write the JSON report here instead of stdout")

    for name, func, help_ in [
        ("verify", cmd_verify, "check orthogonality and completeness"),
        ("analyze", cmd_analyze, "reducibility, blocks, multiplicity bounds, distinguishability"),
        ("distinguish", cmd_distinguish, "discriminate with an entanglement budget"),
    ]:
        p = sub.add_parser(name, help=help_)
        common(p)
        if name == "distinguish":
            p.add_argument("--ebits", choices=["0", "1", "2", "auto"], default="auto")
        p.set_defaults(func=func)

    p = sub.add_parser("batch", help="verify and analyze catalog entries over several seeds")
    p.add_argument("opm", nargs="*", help="catalog names (default: all)")
    p.add_argument("--all", action="store_true")
    p.add_argument("--seed", type=int, default=1, help="first seed")
    p.add_argument("--seeds", type=int, default=1, help="number of seeds per entry")
    p.add_argument("--tol", type=float, default=TOL)
    p.add_argument("--sweep", action="store_true", help="also run the ebit sweep")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if hasattr(args, "tol") and not (0 < args.tol < 1e-3):
        print(f"error: tolerance {args.tol} must be positive and below 1e-3", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except (ConfigError, OpmError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
