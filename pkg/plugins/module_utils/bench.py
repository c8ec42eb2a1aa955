"""
Convergence experiments and their reports.

- run_table1: regular fans on random quadratic graphs, per valence
- run_table2: random sphere triangulations, per mesh size
- run_parallelogram: parallelogram fans over smooth surfaces
- run_counterexample: the valence-4 family with c-independent geometry

Every runner takes an ExperimentConfig and an optional log object
(anything with debug()/warn(), e.g. an AnsibleModule), never raises for a
single bad fan or vertex, and returns a report whose CSV/JSON rendering is
byte-stable for a fixed config.
"""

from __future__ import absolute_import, division, print_function
__metaclass__ = type

import csv
import hashlib
import io
import json
import math
import os
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .curvature_errors import CurvatureError, NonPositiveError
from .curvature_schemes import SchemeId, estimate_mesh, evaluate_fan
from .experiment_config import ExperimentKind, OutputFormat
from .geometry_core import angular_defects
from .sphere_hull import average_edge_length, sphere_mesh
from .synthesis import (
    QuadraticForm,
    builtin_surface,
    counterexample_family,
    parallelogram_family,
    refine,
    regular_fan,
    true_curvatures,
)

REPORT_HEADER = ("scheme", "n_or_N", "level", "eta", "eps", "slope", "flag")
COUNTEREXAMPLE_HEADER = ("scheme", "c", "level", "eta", "value", "true_G", "error")
NUMBER_FORMAT = "%.12g"


class _Silent:
    def debug(self, msg):
        pass

    def warn(self, msg):
        pass


def _log(log):
    return log if log is not None else _Silent()


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return NUMBER_FORMAT % value
    return str(value)


def _json_number(value):
    if value is None:
        return None
    value = float(value)
    return value if math.isfinite(value) else None


def fit_order(errors, etas):
    """
    Least-squares slope of log(error) against log(eta).

    Raises:
        NonPositiveError: an error sample is zero or negative
        ValueError: fewer than two pairs, nonpositive eta, or all etas equal
    """
    errors = np.asarray(errors, dtype=float)
    etas = np.asarray(etas, dtype=float)
    if errors.shape != etas.shape or errors.size < 2:
        raise ValueError("fit_order needs at least two (error, eta) pairs of equal length")
    if np.any(~np.isfinite(errors)) or np.any(errors <= 0):
        raise NonPositiveError(f"errors must be positive and finite to fit an order: {errors.tolist()}")
    if np.any(etas <= 0):
        raise ValueError(f"etas must be positive: {etas.tolist()}")
    log_eta = np.log(etas)
    if np.ptp(log_eta) == 0:
        raise ValueError("etas must not all be equal")
    return float(np.polyfit(log_eta, np.log(errors), 1)[0])


@dataclass
class ErrorRow:
    scheme: str
    key: object
    level: Optional[float]
    eta: float
    eps: float
    slope: Optional[float] = None
    flag: str = "ok"

    def as_list(self):
        return [self.scheme, _fmt(self.key), _fmt(self.level), _fmt(self.eta), _fmt(self.eps),
                _fmt(self.slope), self.flag]

    def as_dict(self):
        return OrderedDict([
            ("scheme", self.scheme),
            ("n_or_N", self.key),
            ("level", _json_number(self.level)),
            ("eta", _json_number(self.eta)),
            ("eps", _json_number(self.eps)),
            ("slope", _json_number(self.slope) if self.slope is not None else None),
            ("flag", self.flag),
        ])


@dataclass
class ErrorTable:
    """Rows keyed by (scheme, valence / mesh size / surface, level)."""

    kind: str
    rows: list = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def select(self, scheme, key):
        scheme = SchemeId(scheme).value
        return [r for r in self.rows if r.scheme == scheme and r.key == key]

    def eps(self, scheme, key):
        return [r.eps for r in self.select(scheme, key)]

    def slope(self, scheme, key):
        rows = self.select(scheme, key)
        return rows[0].slope if rows else None

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(REPORT_HEADER)
        for row in self.rows:
            writer.writerow(row.as_list())
        return buf.getvalue()

    def to_json(self):
        return json.dumps({"kind": self.kind, "rows": [r.as_dict() for r in self.rows]}, indent=2) + "\n"


def _attach_slopes(rows, scheme, key, log):
    """Fit one order for a (scheme, key) group and store it on every row of the group."""
    usable = [r for r in rows if math.isfinite(r.eps)]
    if len(usable) < 2:
        for r in rows:
            r.slope = float("nan")
        log.warn(f"{scheme} @ {key}: fewer than two usable levels, no order fitted")
        return
    try:
        slope = fit_order([r.eps for r in usable], [r.eta for r in usable])
    except NonPositiveError:
        slope = float("inf")
        for r in rows:
            if r.flag == "ok":
                r.flag = "zero_error"
        log.warn(f"{scheme} @ {key}: zero error sample, order reported as inf")
    for r in rows:
        r.slope = slope


def _row_flag(used, total):
    if used == 0:
        return "no_valid_samples"
    if used < total:
        return f"excluded={total - used}"
    return "ok"


def _mean_spoke(fan):
    return float(np.mean(np.linalg.norm(fan.spokes, axis=1)))


def _scheme_truth(scheme, gaussian, mean):
    return gaussian if scheme.is_gaussian else abs(mean)


def run_table1(cfg, log=None):
    """
    Mean absolute error of each scheme on regular fans over M random quadratic graphs.

    The coefficient stream of valence n is default_rng([seed, n]), so a cell
    does not depend on which other valences are requested.
    """
    log = _log(log)
    table = ErrorTable(ExperimentKind.TABLE1.value)
    for n in cfg.valences:
        rng = np.random.default_rng([cfg.seed, n])
        forms = [QuadraticForm.random(rng) for _ in range(cfg.samples)]
        truths = [true_curvatures(a) for a in forms]
        per_scheme = {s: [] for s in cfg.schemes}
        for level in cfg.levels:
            sums = {s: [] for s in cfg.schemes}
            etas = []
            for form, truth in zip(forms, truths):
                try:
                    fan = regular_fan(form, n, level)
                except CurvatureError as e:
                    log.debug(f"n={n} l1={level}: {e}")
                    continue
                etas.append(_mean_spoke(fan))
                for scheme in cfg.schemes:
                    try:
                        value = evaluate_fan(fan, scheme, cfg.voronoi_rule)
                    except CurvatureError:
                        continue
                    if math.isfinite(value):
                        sums[scheme].append(abs(value - _scheme_truth(scheme, *truth)))
            eta = float(np.mean(etas)) if etas else float("nan")
            for scheme in cfg.schemes:
                errs = sums[scheme]
                eps = math.fsum(errs) / len(errs) if errs else float("nan")
                flag = _row_flag(len(errs), len(forms))
                if flag != "ok":
                    log.warn(f"table1 {scheme.value} n={n} l1={level}: {flag}")
                per_scheme[scheme].append(ErrorRow(scheme.value, n, level, eta, eps, flag=flag))
        for scheme in cfg.schemes:
            _attach_slopes(per_scheme[scheme], scheme.value, n, log)
            table.rows.extend(per_scheme[scheme])
        log.debug(f"table1 n={n}: {len(cfg.levels)} levels x {len(forms)} samples")
    return table


def run_table2(cfg, log=None):
    """
    Mean absolute error against G = 1 (and H = 1 for H1) over hull
    triangulations of random unit-sphere samples, one mesh per size.
    """
    log = _log(log)
    table = ErrorTable(ExperimentKind.TABLE2.value)
    per_scheme = {s: [] for s in cfg.schemes}
    for size in cfg.sphere_sizes:
        _, mesh = sphere_mesh(size, [cfg.seed, size], log=log)
        total_defect = float(np.nansum(angular_defects(mesh)))
        if abs(total_defect - 4.0 * math.pi) > 1e-9:
            log.warn(f"table2 N={size}: defect sum {total_defect!r} differs from 4*pi")
        eta = average_edge_length(mesh)
        report = estimate_mesh(mesh, cfg.schemes, cfg.voronoi_rule, log=log)
        for scheme in cfg.schemes:
            eps, used = report.mean_abs_error(scheme, 1.0)
            per_scheme[scheme].append(
                ErrorRow(scheme.value, size, None, eta, eps, flag=_row_flag(used, mesh.vertex_count))
            )
        log.debug(f"table2 N={size}: eta={eta:.4g}, F={mesh.face_count}")
    for scheme in cfg.schemes:
        _attach_slopes(per_scheme[scheme], scheme.value, "all sizes", log)
        table.rows.extend(per_scheme[scheme])
    return table


def run_parallelogram(cfg, log=None):
    """Error against the surface curvature for parallelogram fans shrinking with r."""
    log = _log(log)
    table = ErrorTable(ExperimentKind.PARALLELOGRAM.value)
    for name in cfg.surfaces:
        surface, u = builtin_surface(name)
        family = parallelogram_family(surface, u)
        fans = refine(family, cfg.levels)
        for scheme in cfg.schemes:
            truth = _scheme_truth(scheme, family.true_gaussian, family.true_mean)
            rows = []
            for level, fan in fans:
                try:
                    eps, flag = abs(evaluate_fan(fan, scheme, cfg.voronoi_rule) - truth), "ok"
                except CurvatureError as e:
                    eps, flag = float("nan"), "ill_conditioned"
                    log.warn(f"parallelogram {name} {scheme.value} r={level}: {e}")
                rows.append(ErrorRow(scheme.value, name, level, _mean_spoke(fan), eps, flag=flag))
            _attach_slopes(rows, scheme.value, name, log)
            table.rows.extend(rows)
    return table


@dataclass
class CounterexampleRow:
    scheme: str
    c: float
    level: float
    eta: float
    value: float
    true_gaussian: float

    @property
    def error(self):
        return abs(self.value - self.true_gaussian)


@dataclass
class CounterexampleReport:
    """
    Values of each Gaussian scheme on fans whose geometry ignores c, against
    the true curvature 4 - c^2.
    """

    rows: list = field(default_factory=list)
    coordinates_identical: bool = True
    limits: dict = field(default_factory=dict)
    irreducible_error: dict = field(default_factory=dict)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(COUNTEREXAMPLE_HEADER)
        for r in self.rows:
            writer.writerow([r.scheme, _fmt(r.c), _fmt(r.level), _fmt(r.eta), _fmt(r.value),
                             _fmt(r.true_gaussian), _fmt(r.error)])
        return buf.getvalue()

    def to_json(self):
        data = OrderedDict([
            ("kind", ExperimentKind.COUNTEREXAMPLE.value),
            ("coordinates_identical", self.coordinates_identical),
            ("limits", {k: _json_number(v) for k, v in self.limits.items()}),
            ("irreducible_error", {k: _json_number(v) for k, v in self.irreducible_error.items()}),
            ("rows", [OrderedDict([
                ("scheme", r.scheme), ("c", r.c), ("level", r.level), ("eta", _json_number(r.eta)),
                ("value", _json_number(r.value)), ("true_G", r.true_gaussian), ("error", _json_number(r.error)),
            ]) for r in self.rows]),
        ])
        return json.dumps(data, indent=2) + "\n"


def run_counterexample(cfg, log=None):
    """
    Evaluate every requested Gaussian scheme on the counterexample fans for
    each c and level. The limit of a scheme is its value at the smallest level;
    the irreducible error is max over c of |limit - (4 - c^2)|.
    """
    log = _log(log)
    schemes = [s for s in cfg.schemes if s.is_gaussian]
    if len(schemes) < len(cfg.schemes):
        log.debug("counterexample: H1 skipped, the mean curvature does not depend on c")

    fans = {c: refine(counterexample_family(c), cfg.levels) for c in cfg.counterexample_values}
    reference = fans[cfg.counterexample_values[0]]
    identical = all(
        fan.same_coordinates(ref_fan)
        for c_fans in fans.values()
        for (_, fan), (_, ref_fan) in zip(c_fans, reference)
    )
    if not identical:
        log.warn("counterexample fans differ across c")

    report = CounterexampleReport(coordinates_identical=identical)
    for scheme in schemes:
        gaps = []
        for c in cfg.counterexample_values:
            truth = 4.0 - c * c
            value = float("nan")
            for level, fan in fans[c]:
                try:
                    value = evaluate_fan(fan, scheme, cfg.voronoi_rule)
                except CurvatureError as e:
                    value = float("nan")
                    log.warn(f"counterexample {scheme.value} c={c} r1={level}: {e}")
                report.rows.append(CounterexampleRow(scheme.value, c, level, _mean_spoke(fan), value, truth))
            report.limits.setdefault(scheme.value, value)
            gaps.append(abs(value - truth))
        report.irreducible_error[scheme.value] = max((g for g in gaps if math.isfinite(g)), default=float("nan"))
    return report


RUNNERS = {
    ExperimentKind.TABLE1: run_table1,
    ExperimentKind.TABLE2: run_table2,
    ExperimentKind.PARALLELOGRAM: run_parallelogram,
    ExperimentKind.COUNTEREXAMPLE: run_counterexample,
}


def run_experiment(cfg, log=None):
    """Dispatch on cfg.kind."""
    return RUNNERS[ExperimentKind(cfg.kind)](cfg, log=log)


def render_report(report, fmt):
    return report.to_json() if OutputFormat(fmt) is OutputFormat.JSON else report.to_csv()


def write_report(report, fmt, path=None):
    """
    Render a report as CSV or JSON, writing it to path when given.

    Returns:
        str: the rendered text
    """
    text = render_report(report, fmt)
    if path:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    return text


def sync_file(path, text, check_mode=False):
    """
    Write text to path only when the content differs from what is on disk.

    Returns:
        (changed, sha256 hex digest of text)
    """
    digest = hashlib.sha256(text.encode("utf-8")).hexdigest()
    current = None
    if os.path.exists(path):
        with open(path, "rb") as f:
            current = hashlib.sha256(f.read()).hexdigest()
    if current == digest:
        return False, digest
    if not check_mode:
        with open(path, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
    return True, digest
