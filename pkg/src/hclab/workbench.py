"""Request validation, dispatch, reports and the on-disk result cache.

A report is a JSON object serialised with a fixed key order and no
timestamps, so identical requests give identical bytes whatever the
worker count.  Cache entries are named by the SHA-256 of the canonical
request plus the package version and are written through a temporary
file followed by an atomic rename.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import os
import tempfile
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np

from . import __version__, chevalley, contraction, exactlin, groupring, hecke, invariants, qwords
from .chevalley import SubgroupDescriptor
from .errors import GuardError

CACHE_POLICIES = ("use", "refresh", "off")
FORMATS = ("json", "csv")
ENV_CACHE_DIR = "HCLAB_CACHE_DIR"

# every hard guard, listed by ``hclab --help``
GUARDS: Dict[str, object] = {
    "group order (chevalley.ORDER_GUARD)": chevalley.ORDER_GUARD,
    "Borel cosets (chevalley.COSET_GUARD)": chevalley.COSET_GUARD,
    "wreath product order (chevalley.WREATH_GUARD)": chevalley.WREATH_GUARD,
    "transrep source rank (chevalley.TRANSREP_GUARD)": chevalley.TRANSREP_GUARD,
    "Hecke rank (hecke.RANK_GUARD)": hecke.RANK_GUARD,
    "integral lift rank (hecke.INTEGRAL_GUARD)": hecke.INTEGRAL_GUARD,
    "monomials per slice (invariants.MONOMIAL_GUARD)": invariants.MONOMIAL_GUARD,
    "model total length (invariants.MODEL_TOTAL_GUARD)": invariants.MODEL_TOTAL_GUARD,
    "model degree (invariants.MODEL_DEGREE_GUARD)": invariants.MODEL_DEGREE_GUARD,
    "word degree (qwords.DEGREE_GUARD)": qwords.DEGREE_GUARD,
    "hecke-regular total length (contraction.REGULAR_TOTAL_GUARD)": contraction.REGULAR_TOTAL_GUARD,
}


class UsageError(ValueError):
    """An invalid request; never reaches a compute module."""


@dataclass(frozen=True)
class Request:
    command: str
    action: str
    params: Tuple[Tuple[str, object], ...] = ()
    fmt: str = "json"

    def get(self, name: str, default=None):
        return dict(self.params).get(name, default)

    def canonical(self) -> str:
        body = {"command": self.command, "action": self.action, "params": dict(sorted(self.params)), "format": self.fmt}
        return json.dumps(body, sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(f"{__version__}\n{self.canonical()}".encode()).hexdigest()


def make_request(command: str, action: str, fmt: str = "json", **params) -> Request:
    clean = tuple(sorted((k, v) for k, v in params.items() if v is not None))
    return Request(command, action, clean, fmt)


@dataclass
class Outcome:
    text: str
    exit_code: int
    cache_status: str
    warnings: List[str] = field(default_factory=list)


# ---------------------------------------------------------------------------
# validation


def _need(req: Request, *names: str) -> None:
    missing = [n for n in names if req.get(n) is None]
    if missing:
        raise UsageError(f"{req.command} {req.action} needs " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _prime(req: Request) -> None:
    p = req.get("p")
    if p is not None:
        try:
            exactlin.check_prime(p)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


def _nonneg(req: Request, *names: str) -> None:
    for n in names:
        v = req.get(n)
        if v is not None and v < 0:
            raise UsageError(f"--{n.replace('_', '-')} must be non-negative")


REQUIRED: Dict[Tuple[str, str], Tuple[str, ...]] = {
    ("hecke", "verify"): ("p", "n"),
    ("hecke", "identity"): ("p", "n", "k"),
    ("hecke", "ds"): ("p", "m"),
    ("steinberg", "check"): ("p", "n"),
    ("steinberg", "chain"): ("p", "k"),
    ("invariants", "hilbert"): ("n", "max_degree"),
    ("invariants", "hom"): ("n", "k", "target", "max_degree"),
    ("words", "count"): ("p", "n", "k", "max_degree"),
    ("words", "bottom"): ("p", "k"),
    ("words", "adem"): ("m", "max_degree"),
    ("contraction", "certify"): ("p", "m", "backend"),
    ("chevalley", "epi"): ("p", "m", "n"),
    ("chevalley", "transrep"): ("p", "n", "m"),
}

SERIES_COMMANDS = {("invariants", "hilbert"), ("words", "count")}


def validate(req: Request) -> None:
    key = (req.command, req.action)
    if key not in REQUIRED:
        raise UsageError(f"unknown command {req.command} {req.action}")
    if req.fmt not in FORMATS:
        raise UsageError(f"--format must be one of {FORMATS}")
    if req.fmt == "csv" and key not in SERIES_COMMANDS:
        raise UsageError("csv output is defined for Hilbert series reports only")
    _need(req, *REQUIRED[key])
    _prime(req)
    _nonneg(req, "n", "k", "m", "max_degree")
    for name in ("lambda_", "mu"):
        v = req.get(name)
        if v is not None and req.get("p") is not None and v % req.get("p") == 0:
            raise UsageError("--lambda and --mu must be nonzero mod p")
    if key == ("invariants", "hilbert") and req.get("subgroup") is None and req.get("k") is None:
        raise UsageError("invariants hilbert needs --k (model R_nL_k) or --subgroup")
    if key == ("invariants", "hom") and req.get("p", 2) != 2:
        raise UsageError("the invariant models exist at p = 2 only")
    if key == ("contraction", "certify"):
        backend = req.get("backend")
        if backend not in contraction.BACKENDS:
            raise UsageError(f"--backend must be one of {contraction.BACKENDS}")
        if backend == "invariants" and req.get("max_degree") is None:
            raise UsageError("the invariants backend needs --max-degree")
        if backend == "hecke-regular" and req.get("max_degree") is not None:
            raise UsageError("the hecke-regular backend is ungraded; drop --max-degree")
        if (req.get("lambda_") is None) != (req.get("mu") is None):
            raise UsageError("give both --lambda and --mu, or neither")
    if key == ("words", "count") and req.get("n") + req.get("k") == 0:
        raise UsageError("word length n + k must be positive")


# ---------------------------------------------------------------------------
# dispatch; each handler returns (payload, verified)


def _series_payload(computation: str, p: int, n: int, k: Optional[int], D: int, series) -> Dict[str, object]:
    return {"computation": computation, "p": p, "n": n, "k": k, "max_degree": D, "series": series}


def _hecke_verify(r: Request):
    out = hecke.verify_presentation(r.get("n"), r.get("p"))
    out = dict(out)
    n = r.get("n")
    out["integral_lift"] = bool(hecke.verify_integral_lift(n, r.get("p"))) if n <= hecke.INTEGRAL_GUARD else None
    return out, bool(out["verified"] and out["integral_lift"] is not False)


def _hecke_identity(r: Request):
    n, k, p = r.get("n"), r.get("k"), r.get("p")
    out: Dict[str, object] = {"n": n, "k": k, "p": p}
    out.update(hecke.key_identity(n, k, p))
    pairs = _scalar_pairs(r, p)
    inv = {f"{a},{b}": bool(hecke.corner_invertibility(n, k, p, a, b)) for a, b in pairs}
    out["corner_invertible"] = inv
    ok = out["identity_holds"] and out["orthogonal"] and out["both_idempotent"] and all(inv.values())
    return out, bool(ok)


def _hecke_ds(r: Request):
    out = {"m": r.get("m"), "p": r.get("p")}
    out.update(hecke.chain_products(r.get("m"), r.get("p")))
    return out, bool(out["d_squared_zero"] and out["s_squared_zero"])


def _steinberg_check(r: Request):
    n, p = r.get("n"), r.get("p")
    out = dict(groupring.steinberg_check(n, p))
    coset_guard_ok = chevalley.coset_count_formula(n, p) <= chevalley.COSET_GUARD
    out["matches_hecke"] = bool(groupring.steinberg_vs_hecke(n, p)) if coset_guard_ok else None
    ok = out["idempotent"] and out["p_integral"] and out["matches_hecke"] is not False
    return out, bool(ok)


def _steinberg_chain(r: Request):
    k, p = r.get("k"), r.get("p")
    holds = bool(groupring.steinberg_chain(k, p))
    return {"k": k, "p": p, "chain": holds}, holds


def _invariants_hilbert(r: Request):
    n, D, jobs = r.get("n"), r.get("max_degree"), r.get("jobs", 1)
    if r.get("subgroup") is not None:
        desc = SubgroupDescriptor.parse(r.get("subgroup"), n, 2)
        dims = [(d, invariants.invariant_basis(desc, d).dim) for d in range(D + 1)]
        series = [[d, c] for d, c in dims if c]
        return _series_payload(f"invariants:{desc.tag}", 2, n, None, D, series), True
    k = r.get("k")
    hs = invariants.node_series(n, k, D, jobs=jobs)
    return _series_payload("invariants:model", 2, n, k, D, hs.series()), True


def _parse_target(text: str) -> Tuple[int, int]:
    try:
        a, b = (int(x) for x in str(text).split(","))
    except ValueError:
        raise UsageError("--target takes N,K (e.g. 2,0)") from None
    return a, b


def _invariants_hom(r: Request):
    n, k, D = r.get("n"), r.get("k"), r.get("max_degree")
    tn, tk = _parse_target(r.get("target"))
    window = r.get("window", D)
    if window < D:
        raise UsageError("--window must be at least --max-degree")
    src = invariants.module_model(n, k, window)
    tgt = invariants.module_model(tn, tk, window)
    dim = invariants.truncated_hom(src, tgt, D, window)
    out = {"source": [n, k], "target": [tn, tk], "p": 2, "max_degree": D, "window": window, "dimension": dim}
    return out, True


def _words_count(r: Request):
    p, n, k, D = r.get("p"), r.get("n"), r.get("k"), r.get("max_degree")
    series = [[d, c] for d, c in qwords.count_series(p, n, k, D) if c]
    return _series_payload("words", p, n, k, D, series), True


def _words_bottom(r: Request):
    p, k = r.get("p"), r.get("k")
    out = dict(qwords.bottom_degree(p, k))
    out["formula"] = 2 * p**k - 1 - k if k else 1
    ok = out["degree"] == out["formula"] and out["multiplicity"] == 1
    return out, bool(ok)


def _words_adem(r: Request):
    m, D = r.get("m"), r.get("max_degree")
    rows = []
    ok = True
    for d in range(1, D + 1):
        M, free, adm = qwords.adem_matrix(m, d)
        if not free and not adm:
            continue
        rk = exactlin.rank(M, 2) if M.size else 0
        ok = ok and rk == len(adm)
        rows.append({"d": d, "free": len(free), "admissible": len(adm), "rank": rk})
    return {"m": m, "p": 2, "max_degree": D, "degrees": rows, "rank_equals_admissible": ok}, ok


def _scalar_pairs(r: Request, p: int) -> List[Tuple[int, int]]:
    lam, mu = r.get("lambda_"), r.get("mu")
    if lam is not None:
        return [(lam % p, mu % p)]
    return [(a, b) for a in range(1, p) for b in range(1, p)]


def _contraction_certify(r: Request):
    c = contraction.build_total_complex(r.get("m"), r.get("p"), r.get("backend"), r.get("max_degree"))
    cert = contraction.exactness_certificate(c, pairs=_scalar_pairs(r, c.p))
    ok = cert["exact"] and cert["d_squared_zero"] and cert["s_squared_zero"] and contraction.all_invertible(cert)
    return cert, bool(ok)


def _chevalley_epi(r: Request):
    m, n, p = r.get("m"), r.get("n"), r.get("p")
    formula = chevalley.count_epis_formula(m, n, p)
    brute = sum(1 for _ in chevalley.enumerate_epis(m, n, p))
    return {"m": m, "n": n, "p": p, "formula": formula, "brute_force": brute, "agree": formula == brute}, formula == brute


def _chevalley_transrep(r: Request):
    out = chevalley.transrep_injectivity(r.get("p"), r.get("n"), r.get("m"))
    return out, bool(out["injective"])


HANDLERS: Dict[Tuple[str, str], Callable[[Request], Tuple[Dict[str, object], bool]]] = {
    ("hecke", "verify"): _hecke_verify,
    ("hecke", "identity"): _hecke_identity,
    ("hecke", "ds"): _hecke_ds,
    ("steinberg", "check"): _steinberg_check,
    ("steinberg", "chain"): _steinberg_chain,
    ("invariants", "hilbert"): _invariants_hilbert,
    ("invariants", "hom"): _invariants_hom,
    ("words", "count"): _words_count,
    ("words", "bottom"): _words_bottom,
    ("words", "adem"): _words_adem,
    ("contraction", "certify"): _contraction_certify,
    ("chevalley", "epi"): _chevalley_epi,
    ("chevalley", "transrep"): _chevalley_transrep,
}


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


def compute(req: Request) -> Tuple[Dict[str, object], bool]:
    validate(req)
    payload, ok = HANDLERS[(req.command, req.action)](req)
    return _jsonable(payload), ok


# ---------------------------------------------------------------------------
# serialisation


def render(payload: Dict[str, object], fmt: str) -> str:
    if fmt == "json":
        return json.dumps(payload, ensure_ascii=False, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["computation", "p", "n", "k", "max_degree", "degree", "dim"])
    head = [payload["computation"], payload["p"], payload["n"], payload["k"], payload["max_degree"]]
    for d, c in payload["series"]:  # type: ignore[union-attr]
        w.writerow(head + [d, c])
    return buf.getvalue()


# ---------------------------------------------------------------------------
# cache


class Cache:
    def __init__(self, directory: Path):
        self.dir = Path(directory)

    def path(self, req: Request) -> Path:
        return self.dir / f"{req.digest()}.json"

    def load(self, req: Request) -> Tuple[Optional[Dict[str, object]], List[str]]:
        """(entry, warnings); corrupt or foreign entries are evicted."""
        path = self.path(req)
        if not path.exists():
            return None, []
        try:
            entry = json.loads(path.read_text(encoding="utf-8"))
            if entry.get("version") != __version__:
                return None, []  # stale version: ignored, overwritten on store
            if entry.get("digest") != req.digest() or not isinstance(entry.get("payload"), dict):
                raise ValueError("digest mismatch")
            if not isinstance(entry.get("verified"), bool):
                raise ValueError("missing verdict")
            return entry, []
        except (ValueError, OSError, AttributeError):
            path.unlink(missing_ok=True)
            return None, [f"evicted corrupt cache entry {path.name}"]

    def store(self, req: Request, payload: Dict[str, object], verified: bool) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        entry = {
            "digest": req.digest(),
            "version": __version__,
            "created": time.time(),
            "request": json.loads(req.canonical()),
            "verified": verified,
            "payload": payload,
        }
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-", suffix=".json")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                json.dump(entry, fh, ensure_ascii=False, sort_keys=False)
            os.replace(tmp, self.path(req))
        except BaseException:
            Path(tmp).unlink(missing_ok=True)
            raise


def resolve_cache_dir(cli_value: Optional[str]) -> Path:
    """HCLAB_CACHE_DIR beats --cache-dir, which beats ~/.cache/hclab."""
    env = os.environ.get(ENV_CACHE_DIR)
    if env:
        return Path(env)
    if cli_value:
        return Path(cli_value)
    return Path.home() / ".cache" / "hclab"


def error_report(exc: Exception) -> Dict[str, object]:
    if isinstance(exc, GuardError):
        return {"error": "guard", "what": exc.what, "estimate": exc.estimate, "limit": exc.limit}
    return {"error": "usage", "message": str(exc)}


def run(req: Request, cache_dir: Optional[Path] = None, policy: str = "use", jobs: int = 1) -> Outcome:
    """Validate, consult the cache, compute, render.  Exit codes 0/1/2."""
    if policy not in CACHE_POLICIES:
        return Outcome(render(error_report(UsageError(f"cache policy must be one of {CACHE_POLICIES}")), "json"), 2, "off")
    try:
        validate(req)
    except (UsageError, ValueError) as exc:
        return Outcome(render(error_report(exc), "json"), 2, "off")
    # jobs changes how, never what: it is not part of the request digest
    work = Request(req.command, req.action, tuple(sorted(dict(req.params, jobs=jobs).items())), req.fmt) if jobs > 1 else req
    cache = Cache(cache_dir) if (policy != "off" and cache_dir is not None) else None
    warnings: List[str] = []
    status = "off" if cache is None else "miss"
    payload: Optional[Dict[str, object]] = None
    verified = False
    if cache is not None and policy == "use":
        entry, warnings = cache.load(req)
        if entry is not None:
            payload, verified, status = entry["payload"], entry["verified"], "hit"  # type: ignore[assignment]
    if payload is None:
        try:
            payload, verified = compute(work)
        except GuardError as exc:
            return Outcome(render(error_report(exc), "json"), 2, status, warnings)
        except ValueError as exc:
            return Outcome(render(error_report(exc), "json"), 2, status, warnings)
        if cache is not None:
            cache.store(req, payload, verified)
            if policy == "refresh":
                status = "refresh"
    if warnings:
        payload = dict(payload)
        payload["warnings"] = warnings
    if req.fmt == "csv":
        text = render(payload, "csv")
    else:
        text = render(payload, "json")
    return Outcome(text, 0 if verified else 1, status, warnings)
