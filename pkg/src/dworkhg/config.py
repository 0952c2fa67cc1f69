"""Sweep configuration files.

A config is an INI-style text file. ``[report]`` holds run-wide settings;
every other section is a case block that expands into a grid of cases::

    [report]
    format = json
    output = report.json
    seed = 0
    samples = 5

    [theorem-grid]
    kind = theorem
    p = 3, 5, 7, 13
    N = 2, 3, 4, 6
    r = all
    d = 1-3
    n = 1-3

Keys are case sensitive (``N`` is a denominator, ``n`` a precision).
Combinations with p | N are dropped from the grid.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import ReducibleModulus
from .padic import FqSpec, is_prime, parse_modulus, prime_factors
from .verify import FINITE_KINDS, KINDS, CaseSpec, sample_rationals

DEFAULTS = {"format": "json", "seed": 0, "samples": 5, "n": 2}

_CASE_KEYS = {
    "kind", "p", "N", "r", "a", "random_a", "d", "n", "f", "q", "points",
    "degree", "modulus", "samples", "seed", "tuples",
}


_RANGE = re.compile(r"^(-?\d+)\s*-\s*(-?\d+)$")


class ConfigError(ValueError):
    pass


@dataclass
class SweepConfig:
    cases: list[CaseSpec] = field(default_factory=list)
    format: str = "json"
    output: str | None = None
    seed: int = 0
    samples: int = 5
    echo: dict = field(default_factory=dict)


def parse_int_list(text: str) -> list[int]:
    """'1, 3, 5' or '1-3' or a mix: '1-3, 7'."""
    out = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        m = _RANGE.match(part)
        if m:
            out.extend(range(int(m.group(1)), int(m.group(2)) + 1))
        else:
            out.append(int(part))
    if not out:
        raise ConfigError(f"empty list: {text!r}")
    return out


def _int(block: str, key: str, value: str) -> int:
    try:
        return int(value)
    except ValueError:
        raise ConfigError(f"[{block}] {key}: expected an integer, got {value!r}") from None


def _ints(block: str, key: str, value: str) -> list[int]:
    try:
        return parse_int_list(value)
    except ValueError as exc:
        raise ConfigError(f"[{block}] {key}: {exc}") from None


def _check_modulus(block: str, modulus, p: int, e: int) -> None:
    if len(modulus) - 1 != e:
        raise ConfigError(f"[{block}] modulus has degree {len(modulus) - 1}, expected {e}")
    try:
        FqSpec(p, e, modulus)
    except (ReducibleModulus, ValueError) as exc:
        raise ConfigError(f"[{block}] modulus: {exc}") from None


def _expand_block(name: str, sec: dict, seed: int) -> list[CaseSpec]:
    unknown = set(sec) - _CASE_KEYS
    if unknown:
        raise ConfigError(f"[{name}] unknown keys: {', '.join(sorted(unknown))}")
    kind = sec.get("kind")
    if kind not in KINDS:
        raise ConfigError(f"[{name}] kind must be one of {', '.join(KINDS)}")
    common = {}
    if "samples" in sec:
        common["samples"] = _int(name, "samples", sec["samples"])
    if "seed" in sec:
        common["seed"] = _int(name, "seed", sec["seed"])
    modulus = None
    if "modulus" in sec:
        try:
            modulus = parse_modulus(sec["modulus"])
        except ValueError:
            raise ConfigError(f"[{name}] modulus: bad coefficient list") from None
    ds = _ints(name, "d", sec.get("d", "1"))
    if any(d < 0 for d in ds):
        raise ConfigError(f"[{name}] d must be >= 0")

    if kind in FINITE_KINDS:
        if "q" not in sec:
            raise ConfigError(f"[{name}] finite-field cases need q")
        tuples = sec.get("tuples", "all")
        if tuples not in ("all", "random"):
            raise ConfigError(f"[{name}] tuples must be 'all' or 'random'")
        cases = []
        for q in _ints(name, "q", sec["q"]):
            fac = prime_factors(q) if q > 1 else []
            if len(fac) != 1:
                raise ConfigError(f"[{name}] q = {q} is not a prime power")
            p = fac[0]
            f = 0
            while p**f < q:
                f += 1
            if modulus is not None:
                _check_modulus(name, modulus, p, f)
            for d in ds if kind != "gs-identity" else [0]:
                cid = f"{name}:q={q}" + (f":d={d}" if kind != "gs-identity" else "")
                cases.append(
                    CaseSpec(
                        cid, kind, p, d=d, f=f, n=1, modulus=modulus,
                        tuples=tuples, **common,
                    )
                )
        return cases

    if "p" not in sec:
        raise ConfigError(f"[{name}] p-adic cases need p")
    ps = _ints(name, "p", sec["p"])
    for p in ps:
        if not is_prime(p):
            raise ConfigError(f"[{name}] p = {p} is not prime")
    ns = _ints(name, "n", sec.get("n", str(DEFAULTS["n"])))
    if any(n < 1 for n in ns):
        raise ConfigError(f"[{name}] precision n must be >= 1")
    fs = _ints(name, "f", sec.get("f", "1"))
    if any(f < 1 for f in fs):
        raise ConfigError(f"[{name}] f must be >= 1")
    points = sec.get("points", "sample")
    if points not in ("sample", "all"):
        raise ConfigError(f"[{name}] points must be 'sample' or 'all'")
    degree = _int(name, "degree", sec["degree"]) if "degree" in sec else None
    if degree is not None and degree < 1:
        raise ConfigError(f"[{name}] degree must be >= 1")
    if modulus is not None:
        # the modulus defines the point field F_{p^e}, e = degree (or f)
        if degree is None and (kind != "corollary" or len(fs) != 1):
            raise ConfigError(f"[{name}] modulus needs degree (or a single f)")
        for p in ps:
            _check_modulus(name, modulus, p, degree or fs[0])

    cases = []
    for p in ps:
        for label, a in _a_values(name, kind, sec, p, seed):
            for d in ds:
                for f in fs if kind == "corollary" else [1]:
                    for n in ns:
                        cid = f"{name}:p={p}:a={label}:d={d}"
                        if kind == "corollary":
                            cid += f":f={f}"
                        cid += f":n={n}"
                        cases.append(
                            CaseSpec(
                                cid, kind, p, a=a, d=d, n=n, f=f, points=points,
                                degree=degree, modulus=modulus, **common,
                            )
                        )
    return cases


def _a_values(name: str, kind: str, sec: dict, p: int, seed: int):
    if "random_a" in sec:
        count = _int(name, "random_a", sec["random_a"])
        return [(str(a), a) for a in sample_rationals(p, count, seed)]
    if "a" in sec:
        out = []
        for part in sec["a"].split(","):
            try:
                a = Fraction(part.strip())
            except ValueError:
                raise ConfigError(f"[{name}] a: cannot parse {part!r}") from None
            if a.denominator % p == 0:
                continue
            _check_theorem_range(name, kind, a)
            out.append((str(a), a))
        return out
    if "N" not in sec:
        raise ConfigError(f"[{name}] give N (with r) or a")
    out = []
    for N in _ints(name, "N", sec["N"]):
        if N < 1:
            raise ConfigError(f"[{name}] N must be positive")
        if N % p == 0:
            continue
        rs = range(1, N) if sec.get("r", "all") == "all" else _ints(name, "r", sec["r"])
        for r in rs:
            a = Fraction(r, N)
            _check_theorem_range(name, kind, a)
            out.append((f"{r}/{N}", a))
    return out


def _check_theorem_range(name: str, kind: str, a: Fraction) -> None:
    if kind in ("theorem", "corollary") and not 0 < a < 1:
        raise ConfigError(f"[{name}] {kind} cases need 0 < a < 1, got {a}")


def parse_config(text: str) -> SweepConfig:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse config: {exc}") from None
    report = dict(parser["report"]) if parser.has_section("report") else {}
    cfg = SweepConfig(
        format=report.get("format", DEFAULTS["format"]),
        output=report.get("output"),
        seed=_int("report", "seed", report.get("seed", str(DEFAULTS["seed"]))),
        samples=_int("report", "samples", report.get("samples", str(DEFAULTS["samples"]))),
    )
    if cfg.format not in ("json", "csv"):
        raise ConfigError("[report] format must be json or csv")
    echo_cases = {}
    for name in parser.sections():
        if name == "report":
            continue
        sec = dict(parser[name])
        cfg.cases.extend(_expand_block(name, sec, cfg.seed))
        echo_cases[name] = sec
    cfg.echo = {"seed": cfg.seed, "samples": cfg.samples, "cases": echo_cases}
    return cfg


def load_config(path: str | Path) -> SweepConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)


def bundled_config_text(name: str = "acceptance") -> str:
    return resources.files("dworkhg.data").joinpath(f"{name}.cfg").read_text(encoding="utf-8")


def bundled_config(name: str = "acceptance") -> SweepConfig:
    return parse_config(bundled_config_text(name))
