"""Command-line driver: ``python -m kmsatake <command> ...``."""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

from .root_datum import (ElementCapExceeded, RootDatum, RootDatumError, build_root_datum, load_config,
                         poincare_series, positive_real_coroots)
from .satake import RouteMismatch, SatakeEngine, character_t0, hall_littlewood
from .series import WindowError, format_series, series_to_json
from .symmetrizers import StabilizationError, SymContext
from .tables import verify_rank_one_tables

COMMANDS = ("inspect", "satake", "hall-littlewood", "character", "mzero", "cherednik-check", "tables-check")
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2
CACHE_ENV = "KMSATAKE_CACHE_DIR"


@dataclass
class JobSpec:
    command: str
    config: str | None = None
    lam: str | None = None  # raw --lambda text, parsed once the lattice is known
    depth: int = 4
    q: str = "symbolic"
    route: str = "both"
    adaptive: bool = False
    element_cap: int | None = None
    fmt: str = "pretty"
    lv: int = 3
    nmax: int = 6


class InputError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kmsatake", description="Spherical functions of Kac-Moody root data.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, lam=False):
        sp.add_argument("--config", required=True, help="root-datum JSON file")
        if lam:
            sp.add_argument("--lambda", dest="lam", required=True,
                            help="dominant coweight, comma-separated lattice coordinates")
        sp.add_argument("--depth", type=int, default=4)
        sp.add_argument("--format", dest="fmt", choices=("json", "pretty"), default="pretty")
        sp.add_argument("--element-cap", type=int, default=None)
        sp.add_argument("--adaptive", action="store_true", help="extend cutoffs until coefficients stabilize")

    common(sub.add_parser("inspect", help="summarize a root datum"))
    sp = sub.add_parser("satake", help="Satake image of c_lambda")
    common(sp, lam=True)
    sp.add_argument("--q", default="symbolic", help="'symbolic' or a number such as 4 or 9/4")
    sp.add_argument("--route", choices=("both", "recursion", "closed"), default="both")
    common(sub.add_parser("hall-littlewood", help="H_lambda with t = sigma^2"), lam=True)
    common(sub.add_parser("character", help="Hall-Littlewood polynomial at t = 0"), lam=True)
    common(sub.add_parser("mzero", help="the multiplier m = Gamma Delta^{-1}"))
    sp = sub.add_parser("cherednik-check", help="Gamma ^vDelta = ^vGamma Delta for short v")
    common(sp)
    sp.add_argument("--lv", type=int, default=3, help="length bound for v")
    sp = sub.add_parser("tables-check", help="rank-one cancellation tables")
    sp.add_argument("--nmax", type=int, default=6)
    sp.add_argument("--format", dest="fmt", choices=("json", "pretty"), default="pretty")
    return p


def parse_lambda(text: str, rd: RootDatum) -> tuple:
    try:
        lam = tuple(int(x) for x in text.replace(" ", "").split(",") if x != "")
    except ValueError:
        raise InputError(f"--lambda: expected comma-separated integers, got {text!r}") from None
    if len(lam) != rd.lattice_dim:
        raise InputError(f"--lambda: expected {rd.lattice_dim} coordinates, got {len(lam)}")
    return lam


def job_from_args(args) -> JobSpec:
    job = JobSpec(args.command, fmt=args.fmt)
    for name in ("config", "lam", "depth", "q", "route", "adaptive", "element_cap", "lv", "nmax"):
        if hasattr(args, name):
            setattr(job, name, getattr(args, name))
    if job.depth < 0:
        raise InputError("--depth must be >= 0")
    return job


def _load_datum(job: JobSpec) -> tuple[RootDatum, dict]:
    try:
        cfg = load_config(job.config)
    except FileNotFoundError:
        raise InputError(f"{job.config}: no such file") from None
    if isinstance(cfg, dict) and cfg.get("schema", 1) != 1:
        raise InputError(f"{job.config}: unsupported schema {cfg.get('schema')!r} (expected 1)")
    try:
        rd = build_root_datum(cfg, element_cap=job.element_cap)
    except RootDatumError as exc:
        raise InputError(f"{job.config}: {exc}") from None
    return rd, cfg


def _emit_series(f, fmt: str, extra: dict | None = None, bare_zero=False) -> str:
    if fmt == "json":
        data = dict(extra or {})
        data["series"] = series_to_json(f)
        data.setdefault("schema", 1)
        return json.dumps(data, ensure_ascii=False, sort_keys=True)
    text = format_series(f)
    if bare_zero:
        # series in e^{-alpha^vee} with ceiling 0: print e^{(0,...)} as a constant
        zero = "e^{(" + ",".join("0" for _ in range(f.rd.lattice_dim)) + ")}"
        text = text.replace("·" + zero, "").replace(zero, "1")
    return text


def _inspect(rd: RootDatum, job: JobSpec) -> dict:
    cor = positive_real_coroots(rd, job.depth)
    ps = poincare_series(rd, "full", job.depth)
    return {
        "schema": 1,
        "cartan": rd.cartan,
        "lattice_dim": rd.lattice_dim,
        "roots_on_basis": rd.R,
        "coroots_in_basis": rd.C,
        "rho": [str(x) for x in rd.rho],
        "parameter_classes": list(rd.class_names),
        "positive_real_coroots": [{"coords": list(b.coords), "height": b.height} for b in cor],
        "poincare_series": {"value": str(ps.value), "exact": ps.exact, "length_bound": job.depth},
    }


def _pretty_inspect(d: dict) -> str:
    lines = [f"cartan: {d['cartan']}", f"lattice_dim: {d['lattice_dim']}",
             f"roots_on_basis: {d['roots_on_basis']}", f"coroots_in_basis: {d['coroots_in_basis']}",
             f"rho: ({', '.join(d['rho'])})", f"parameter classes: {', '.join(d['parameter_classes'])}",
             f"positive real coroots up to height {d['poincare_series']['length_bound']}: "
             f"{len(d['positive_real_coroots'])}"]
    for b in d["positive_real_coroots"]:
        lines.append(f"  {tuple(b['coords'])}  height {b['height']}")
    ps = d["poincare_series"]
    lines.append(f"Poincare series W(sigma^2) up to length {ps['length_bound']}: {ps['value']}"
                 + (" (exact)" if ps["exact"] else ""))
    return "\n".join(lines)


def execute(job: JobSpec) -> tuple[int, str]:
    if job.command == "tables-check":
        if job.nmax < 0:
            raise InputError("--nmax must be >= 0")
        rep = verify_rank_one_tables(job.nmax)
        if job.fmt == "json":
            out = json.dumps(rep.to_json(), ensure_ascii=False, sort_keys=True)
        else:
            lines = []
            for c in rep.cases:
                label = f"n={c.n}" + (f" {c.to_json()['case']}" if c.n else "")
                lines.append(f"{label}: {'pass' if c.passed else 'FAIL'} (total {c.total})")
            lines.append("tables-check: " + ("pass" if rep.passed else "FAIL"))
            out = "\n".join(lines)
        return (EXIT_OK if rep.passed else EXIT_FAIL), out

    rd, _ = _load_datum(job)
    lam = parse_lambda(job.lam, rd) if job.lam is not None else None
    if lam is not None and not rd.is_dominant(lam):
        raise InputError(f"--lambda: {lam} is not dominant")

    if job.command == "inspect":
        d = _inspect(rd, job)
        return EXIT_OK, (json.dumps(d, ensure_ascii=False, sort_keys=True) if job.fmt == "json"
                         else _pretty_inspect(d))
    if job.command == "satake":
        try:
            q = job.q if job.q == "symbolic" else Fraction(job.q)
        except ValueError:
            raise InputError(f"--q: expected 'symbolic' or a number, got {job.q!r}") from None
        if q != "symbolic" and q <= 0:
            raise InputError("--q must be positive")
        eng = SatakeEngine(rd, job.depth, adaptive=job.adaptive)
        res = eng.satake(lam, job.route, q)
        if job.fmt == "json":
            return EXIT_OK, json.dumps(res.to_json(), ensure_ascii=False, sort_keys=True)
        text = format_series(res.series)
        if res.delta_half is None:
            text = f"δ^(1/2)(λ)·[{text}]"
        return EXIT_OK, text
    if job.command == "hall-littlewood":
        return EXIT_OK, _emit_series(hall_littlewood(rd, lam, job.depth), job.fmt)
    if job.command == "character":
        return EXIT_OK, _emit_series(character_t0(rd, lam, job.depth), job.fmt)
    if job.command == "mzero":
        m = SymContext(rd, job.depth, adaptive=job.adaptive).m_sigma()
        return EXIT_OK, _emit_series(m, job.fmt, bare_zero=True)
    if job.command == "cherednik-check":
        rep = SymContext(rd, job.depth, adaptive=job.adaptive).cherednik_check(job.lv)
        if job.fmt == "json":
            out = json.dumps(rep.to_json(), ensure_ascii=False, sort_keys=True)
        else:
            lines = [f"v={'·'.join(f's{i + 1}' for i in e.word) or 'e'}: {'pass' if e.passed else 'FAIL'}"
                     + ("" if e.passed else f" (first difference at {e.first_difference})")
                     for e in rep.entries]
            lines.append(f"cherednik-check (depth {rep.depth}, l(v) <= {rep.length_bound}): "
                         + ("pass" if rep.passed else "FAIL"))
            out = "\n".join(lines)
        return (EXIT_OK if rep.passed else EXIT_FAIL), out
    raise InputError(f"unknown command {job.command!r}")


def _cache_key(job: JobSpec) -> str:
    cfg_bytes = Path(job.config).read_bytes() if job.config else b""
    spec = asdict(job)
    spec.pop("config")
    h = hashlib.sha256()
    h.update(hashlib.sha256(cfg_bytes).hexdigest().encode())
    h.update(json.dumps(spec, sort_keys=True, default=str).encode())
    return h.hexdigest()


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        job = job_from_args(args)
        cache_dir = os.environ.get(CACHE_ENV)
        path = None
        if cache_dir and (job.config is None or Path(job.config).is_file()):
            path = Path(cache_dir) / f"{_cache_key(job)}.json"
            if path.is_file():
                hit = json.loads(path.read_text(encoding="utf-8"))
                stdout.write(hit["output"] + "\n")
                return int(hit["status"])
        status, out = execute(job)
        if path is not None:
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps({"status": status, "output": out}, ensure_ascii=False),
                            encoding="utf-8")
        stdout.write(out + "\n")
        return status
    except InputError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except RootDatumError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except ElementCapExceeded as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except RouteMismatch as exc:
        stderr.write(f"route mismatch: {exc}\n")
        return EXIT_FAIL
    except (StabilizationError, WindowError) as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())
