"""Corpus ingestion, cached parallel invariant evaluation and distinct-value tables.

Invariant ids: ``jones``, ``alexander``, ``homflypt``, ``sl3``, ``det``,
``signature``, ``dbc``, ``khovanov-f2``, ``kt1``, and tuples ``X+Y`` whose
value is the component strings joined by ``" | "``.

Cache layout: ``<cache_dir>/<ledger hash>/<invariant>/<name>`` holding the
canonical value string, written to a temporary file and renamed into place.
"""

from __future__ import annotations

import csv
import hashlib
import io
import math
import os
import statistics
import tempfile
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Sequence

from . import invariants as inv
from . import khovanov as kh
from .diagram import DiagramError, DTCode, LinkDiagram, dt_to_pd, mirror, parse_dt, parse_pd

CSV_HEADER = ["name", "crossing_number", "alternating", "dt_code", "pd_code"]
TUPLE_SEPARATOR = " | "
MIRROR_SUFFIX = "~mirror"


class DetectError(ValueError):
    pass


class ParseError(DetectError):
    def __init__(self, row: int, message: str):
        super().__init__(f"row {row}: {message}")
        self.row = row


class DuplicateName(DetectError):
    pass


class EncodingMismatch(DetectError):
    pass


class UnknownInvariant(DetectError):
    pass


class CoverageGap(DetectError):
    pass


class InsufficientRows(DetectError):
    pass


# --------------------------------------------------------------------------- records


@dataclass(frozen=True)
class KnotRecord:
    name: str
    crossing_number: int
    alternating: bool
    dt: DTCode | None = None
    pd: str | None = None

    def __post_init__(self):
        if self.dt is None and not self.pd:
            raise DetectError(f"{self.name}: record needs a DT or PD code")
        if self.crossing_number < 0:
            raise DetectError(f"{self.name}: crossing number must be nonnegative")

    def diagram(self) -> LinkDiagram:
        """The stored PD when present, else the diagram built from the DT code."""
        if self.pd:
            return parse_pd(self.pd, name=self.name)
        return dt_to_pd(self.dt, name=self.name)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("true", "1", "yes", "y", "a"):
        return True
    if t in ("false", "0", "no", "n"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _record_from_row(row: dict, lineno: int) -> KnotRecord:
    name = (row.get("name") or "").strip()
    if not name:
        raise ParseError(lineno, "missing name")
    try:
        n = int(row["crossing_number"])
        alt = _parse_bool(row["alternating"] or "")
    except (TypeError, ValueError, KeyError) as e:
        raise ParseError(lineno, str(e)) from None
    dt_text = (row.get("dt_code") or "").strip()
    pd_text = (row.get("pd_code") or "").strip()
    if not dt_text and not pd_text:
        raise ParseError(lineno, "neither dt_code nor pd_code given")
    dt = None
    try:
        if dt_text:
            dt = parse_dt(dt_text)
            realized = dt_to_pd(dt).n_crossings
            if realized != n:
                raise EncodingMismatch(f"{name}: declared {n} crossings, DT code has {realized}")
        if pd_text:
            realized = parse_pd(pd_text).n_crossings
            if realized != n:
                raise EncodingMismatch(f"{name}: declared {n} crossings, PD code has {realized}")
    except DiagramError as e:
        raise ParseError(lineno, f"{name}: {e}") from None
    return KnotRecord(name, n, alt, dt, pd_text or None)


def ingest_text(text: str) -> list[KnotRecord]:
    if not text.strip():
        return []
    reader = csv.DictReader(io.StringIO(text))
    header = [h.strip() for h in (reader.fieldnames or [])]
    if header != CSV_HEADER:
        raise ParseError(1, f"expected header {','.join(CSV_HEADER)}")
    out: list[KnotRecord] = []
    seen: set[str] = set()
    for k, row in enumerate(reader):
        if None in row:
            raise ParseError(k + 2, "too many fields")
        rec = _record_from_row(row, k + 2)
        if rec.name in seen:
            raise DuplicateName(f"row {k + 2}: duplicate name {rec.name}")
        seen.add(rec.name)
        out.append(rec)
    return out


def ingest(path, format: str = "csv") -> list[KnotRecord]:
    if format != "csv":
        raise DetectError(f"unsupported corpus format {format!r}")
    return ingest_text(Path(path).read_text(encoding="utf-8"))


def embedded_corpus(which: str = "knots_3_10") -> list[KnotRecord]:
    """Shipped tables: ``knots_3_10`` (prime knots, 3..10 crossings) or ``mutants_11``."""
    text = resources.files("knotdetect").joinpath("data", f"{which}.csv").read_text(encoding="utf-8")
    return ingest_text(text)


# --------------------------------------------------------------------------- invariant registry


def _kh_poly(d: LinkDiagram) -> str:
    return kh.poincare_poly(kh.khovanov_f2(d)).canonical_string()


INVARIANTS: dict[str, Callable[[LinkDiagram], str]] = {
    "jones": lambda d: inv.jones(d).canonical_string(),
    "alexander": lambda d: inv.alexander(d).canonical_string(),
    "homflypt": lambda d: inv.homflypt(d).canonical_string(),
    "sl3": lambda d: inv.sl_n(d, 3).canonical_string(),
    "det": lambda d: str(inv.determinant(d)),
    "signature": lambda d: str(inv.signature(d)),
    "dbc": lambda d: inv.dbc_string(inv.dbc_homology(d)),
    "khovanov-f2": _kh_poly,
    "kt1": lambda d: kh.specialize_t(kh.khovanov_f2(d), 1).canonical_string(),
}

# errors that mark a record as failed rather than aborting the run
RECORD_ERRORS = (inv.InvariantError, DiagramError)


def invariant_parts(invariant_id: str) -> list[str]:
    parts = [p.strip() for p in invariant_id.split("+")]
    for p in parts:
        if p not in INVARIANTS:
            raise UnknownInvariant(f"unknown invariant {p!r}; choose from {', '.join(INVARIANTS)}")
    return parts


def convention_ledger() -> str:
    """Text describing every convention that can change a value string."""
    s = inv.SKEIN
    return "\n".join(
        [
            inv.__doc__ or "",
            kh.__doc__ or "",
            f"skein={s!r}",
            f"tuple-separator={TUPLE_SEPARATOR!r}",
        ]
    )


def ledger_hash() -> str:
    return hashlib.sha256(convention_ledger().encode("utf-8")).hexdigest()[:16]


def compute_value(d: LinkDiagram, invariant_id: str) -> str:
    return TUPLE_SEPARATOR.join(INVARIANTS[p](d) for p in invariant_parts(invariant_id))


# --------------------------------------------------------------------------- cache


class DiskCache:
    def __init__(self, root, invariant_id: str):
        self.dir = Path(root) / ledger_hash() / invariant_id

    def _path(self, name: str) -> Path:
        safe = "".join(c if c.isalnum() or c in "-_.~" else "_" for c in name)
        return self.dir / safe

    def get(self, name: str) -> str | None:
        p = self._path(name)
        try:
            return p.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None

    def put(self, name: str, value: str) -> None:
        self.dir.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=self.dir, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as f:
                f.write(value)
            os.replace(tmp, self._path(name))
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise


# --------------------------------------------------------------------------- evaluation


@dataclass
class Evaluation:
    invariant_id: str
    values: dict[str, str] = field(default_factory=dict)
    failures: dict[str, str] = field(default_factory=dict)


def _task(args) -> tuple[str, str | None, str | None]:
    name, record, invariant_id, use_mirror = args
    try:
        d = record.diagram()
        if use_mirror:
            d = mirror(d)
        return name, compute_value(d, invariant_id), None
    except RECORD_ERRORS as e:
        return name, None, f"{type(e).__name__}: {e}"


def evaluate(
    records: Sequence[KnotRecord],
    invariant_id: str,
    jobs: int = 1,
    cache_dir=None,
    include_mirror: bool = False,
) -> Evaluation:
    """Value strings per record name; with ``include_mirror`` also ``<name>~mirror`` for the mirror image.

    Failures (crossing caps, budgets) are listed per name and never dropped.
    """
    invariant_parts(invariant_id)
    cache = DiskCache(cache_dir, invariant_id) if cache_dir is not None else None
    result = Evaluation(invariant_id)
    todo = []
    for rec in records:
        variants = [(rec.name, False)]
        if include_mirror:
            variants.append((rec.name + MIRROR_SUFFIX, True))
        for name, m in variants:
            hit = cache.get(name) if cache else None
            if hit is not None:
                result.values[name] = hit
            else:
                todo.append((name, rec, invariant_id, m))
    if jobs > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            done = list(pool.map(_task, todo, chunksize=max(1, len(todo) // (4 * jobs))))
    else:
        done = [_task(t) for t in todo]
    for name, value, err in done:
        if err is not None:
            result.failures[name] = err
        else:
            result.values[name] = value
            if cache:
                cache.put(name, value)
    return result


# --------------------------------------------------------------------------- reports


def truncate_percent(distinct: int, total: int) -> str:
    """``100 * distinct / total`` truncated (not rounded) to two decimals."""
    hundredths = (10000 * distinct) // total
    return f"{hundredths // 100}.{hundredths % 100:02d}"


@dataclass(frozen=True)
class ReportRow:
    n: int
    total: int
    distinct: int
    excluded: int = 0

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.distinct, self.total)

    @property
    def percent(self) -> str:
        return truncate_percent(self.distinct, self.total)


@dataclass(frozen=True)
class DetectionReport:
    invariant_id: str
    rows: tuple[ReportRow, ...]
    cumulative: bool = True
    alternating_only: bool = False
    fold_mirror: bool = False

    def row(self, n: int) -> ReportRow:
        for r in self.rows:
            if r.n == n:
                return r
        raise KeyError(n)

    def to_csv(self) -> str:
        lines = ["n,total,distinct,percent"]
        lines += [f"{r.n},{r.total},{r.distinct},{r.percent}" for r in self.rows]
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant_id,
            "cumulative": self.cumulative,
            "alternating_only": self.alternating_only,
            "fold_mirror": self.fold_mirror,
            "rows": [
                {
                    "n": r.n,
                    "total": r.total,
                    "distinct": r.distinct,
                    "excluded": r.excluded,
                    "percent": r.percent,
                }
                for r in self.rows
            ],
        }


def fold_values(values: dict[str, str], names: Iterable[str]) -> dict[str, str]:
    """Bucket key ``min(value, mirrored value)`` per name; needs ``<name>~mirror`` entries."""
    out = {}
    for name in names:
        a, b = values.get(name), values.get(name + MIRROR_SUFFIX)
        if a is not None and b is not None:
            out[name] = min(a, b)
    return out


def detection_report(
    evaluation: Evaluation | dict,
    records: Sequence[KnotRecord],
    cumulative: bool = True,
    alternating_only: bool = False,
    fold_mirror: bool = False,
    max_n: int | None = None,
    invariant_id: str | None = None,
) -> DetectionReport:
    if isinstance(evaluation, Evaluation):
        values, failures = evaluation.values, evaluation.failures
        invariant_id = invariant_id or evaluation.invariant_id
    else:
        values, failures = evaluation, {}
    pool = [r for r in records if r.alternating or not alternating_only]
    if fold_mirror:
        keys = fold_values(values, (r.name for r in pool))
        failed = {r.name for r in pool if r.name in failures or r.name + MIRROR_SUFFIX in failures}
    else:
        keys = {r.name: values[r.name] for r in pool if r.name in values}
        failed = {r.name for r in pool if r.name in failures}
    for r in pool:
        if r.name not in keys and r.name not in failed:
            raise CoverageGap(f"{r.name} has neither a value nor a failure entry")
    failed -= set(keys)
    if failed:
        warnings.warn(f"{len(failed)} records failed and are excluded from the report", stacklevel=2)
    ns = sorted({r.crossing_number for r in pool})
    if max_n is not None:
        ns = [n for n in ns if n <= max_n]
    rows = []
    for n in ns:
        members = [r for r in pool if (r.crossing_number <= n if cumulative else r.crossing_number == n)]
        ok = [r for r in members if r.name in keys]
        if not ok:
            continue
        distinct = len({keys[r.name] for r in ok})
        rows.append(ReportRow(n, len(ok), distinct, len(members) - len(ok)))
    return DetectionReport(invariant_id or "?", tuple(rows), cumulative, alternating_only, fold_mirror)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit ``log(percent) ~ log(c) + n log(base)``.  An estimate only."""

    base: float
    intercept: float
    residuals: tuple[float, ...]
    ns: tuple[int, ...]
    label: str = "estimate"


def decay_fit(report: DetectionReport | Sequence[tuple[int, float]]) -> DecayFit:
    if isinstance(report, DetectionReport):
        pairs = [(r.n, 100 * r.distinct / r.total) for r in report.rows]
    else:
        pairs = [(int(n), float(p)) for n, p in report]
    pairs = [(n, p) for n, p in pairs if 0 < p < 100]
    if len(pairs) < 4:
        raise InsufficientRows("need at least 4 rows below 100%")
    xs = [float(n) for n, _ in pairs]
    ys = [math.log(p) for _, p in pairs]
    slope, intercept = statistics.linear_regression(xs, ys)
    res = tuple(y - (intercept + slope * x) for x, y in zip(xs, ys))
    return DecayFit(math.exp(slope), intercept, res, tuple(n for n, _ in pairs))


def run_detection(
    records: Sequence[KnotRecord],
    invariant_id: str,
    cumulative: bool = True,
    alternating_only: bool = False,
    fold_mirror: bool = False,
    max_n: int | None = None,
    jobs: int = 1,
    cache_dir=None,
) -> tuple[DetectionReport, Evaluation]:
    pool = [r for r in records if (max_n is None or r.crossing_number <= max_n) and (r.alternating or not alternating_only)]
    ev = evaluate(pool, invariant_id, jobs=jobs, cache_dir=cache_dir, include_mirror=fold_mirror)
    rep = detection_report(ev, pool, cumulative, alternating_only, fold_mirror, max_n, invariant_id)
    return rep, ev
