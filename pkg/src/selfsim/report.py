"""Scenario orchestration and report serialization."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

from ._numeric import ctx, exact, mpf, to_float
from .errors import (
    BetaDegenerate,
    BranchError,
    DepthUnavailable,
    OmegaUnavailable,
    OrderUnavailable,
    SelfSimError,
)
from .factor import (
    A1_OVER_A0,
    UNIT_NODE,
    build_factor,
    build_factor_interpolating,
    factor_asymptote,
)
from .limits import estimate_omega, limit_power_restriction, limit_via_transformation
from .root import (
    StrongCouplingExpansion,
    bootstrap_sequence,
    build_root_interpolant,
    build_root_iterated,
    predict_next_coefficient,
    root_asymptote,
)
from .scenarios import Scenario, percentage_error

__all__ = [
    "ReportRow",
    "FinalRow",
    "ScenarioReport",
    "run_scenario",
    "emit_report",
    "load_report",
    "render_comparison",
    "FORMATS",
]

FORMATS = ("table-text", "csv", "json-doc")
OK, FILLED, UNAVAILABLE, INFO = "ok", "filled", "unavailable", "info"
_JSON_DIGITS = 30


@dataclass(frozen=True)
class ReportRow:
    k: int | None
    method: str
    value: object  # working-precision real or None
    error_percent: float | None
    status: str
    note: str = ""


@dataclass(frozen=True)
class FinalRow:
    method: str
    value: object
    error_percent: float | None
    note: str = ""


@dataclass(frozen=True)
class ScenarioReport:
    scenario: str
    rows: tuple
    finals: tuple = ()
    reference: tuple | None = None  # (label, value, source)
    parameters: dict = field(default_factory=dict)  # block -> {name: text}
    annotations: tuple = ()

    def rows_for(self, method: str) -> list:
        return [r for r in self.rows if r.method == method]

    def final_for(self, method: str):
        for f in self.finals:
            if f.method == method:
                return f
        return None

    @property
    def all_unavailable(self) -> bool:
        ordered = [r for r in self.rows if r.status != INFO]
        return bool(ordered) and all(r.status == UNAVAILABLE for r in ordered)


# --------------------------------------------------------------------------
# orchestration
# --------------------------------------------------------------------------


class _Builder:
    def __init__(self, scenario: Scenario):
        self.scenario = scenario
        self.rows, self.finals, self.notes = [], [], list(scenario.notes)
        self.parameters = {}
        ref = scenario.reference(scenario.primary_reference) if scenario.primary_reference else None
        self.reference = ref

    def error(self, value, ref=None):
        ref = ref or self.reference
        if value is None or ref is None or ref.value == 0:
            return None
        return percentage_error(value, ref.value)

    def row(self, k, method, value, status, note="", ref=None):
        self.rows.append(ReportRow(k, method, value, self.error(value, ref) if status != INFO or ref else None, status, note))

    def dump(self, block: str, pairs):
        self.parameters[block] = {name: _text(v) for name, v in pairs}


def _text(v, digits=10) -> str:
    if v is None:
        return "-"
    ex = exact(v)
    if ex is not None:
        return str(ex)
    if type(v).__name__ == "mpc":
        return ctx.nstr(v, digits)
    return ctx.nstr(mpf(v), digits)


def _factor_pairs(approx):
    out = []
    for i, (a, n) in enumerate(approx.factors, 1):
        out.append((f"A{i}", a))
        out.append((f"n{i}", n))
    return out


def _orders(scenario, method, override, lo=1):
    if override is not None:
        return list(override)
    if method in scenario.orders:
        return list(scenario.orders[method])
    return list(range(lo, scenario.series.order + 1))


def _limit_rows(b: _Builder, method: str, est):
    for k in est.orders:
        raw = est.per_order[k]
        if raw is not None:
            b.row(k, method, raw, OK)
        elif k in est.filled:
            b.row(k, method, est.filled[k], FILLED, "neighbour average; " + est.reasons.get(k, ""))
        else:
            b.row(k, method, None, UNAVAILABLE, est.reasons.get(k, ""))
    if est.final is not None:
        b.finals.append(FinalRow(method, est.final, b.error(est.final), "average of the last two orders"))
    else:
        usable = [est.filled[k] for k in sorted(est.filled)]
        if len(usable) == 1:
            b.finals.append(FinalRow(method, usable[0], b.error(usable[0]), "single usable order"))
        else:
            b.notes.append(f"{method}: no final estimate (fewer than two usable orders)")


def _run_power_restriction(b, orders):
    s = b.scenario.series
    if not s.prefactor.exponent < 0:
        b.notes.append("power-restriction: inapplicable (prefactor exponent is not negative)")
        return
    est = limit_power_restriction(s, _orders(b.scenario, "power-restriction", orders))
    _limit_rows(b, "power-restriction", est)


def _run_variable_transformation(b, orders, omega):
    sc = b.scenario
    s = sc.series
    if s.power_step != 1:
        b.notes.append("variable-transformation: inapplicable (series is not in integer powers)")
        return
    estimated = None
    try:
        est = estimate_omega(s, s.order)
        for k, (w, _) in sorted(est.per_order.items()):
            b.rows.append(ReportRow(k, "omega", w, None, INFO if w is not None else UNAVAILABLE,
                                    "" if w is not None else "no real positive omega"))
        estimated = est.selected
    except (OmegaUnavailable, BetaDegenerate, ValueError) as exc:
        b.notes.append(f"omega: {exc}")
    if omega is not None:
        chosen, why = mpf(omega), "given on request"
    elif s.prefactor.exponent == 0 and all(c == 0 for c in s.coefficients[1:]):
        chosen, why = 1, "series is constant; omega is irrelevant"
    elif sc.omega is not None:
        chosen, why = sc.omega
    elif estimated is not None:
        chosen, why = estimated, "estimated from the beta approximants"
    else:
        b.notes.append("variable-transformation: no omega available")
        return
    b.notes.append(f"omega = {_text(chosen)} ({why})")
    if estimated is not None and sc.omega is not None and omega is None:
        b.notes.append(f"omega estimated from the beta approximants: {_text(estimated)}")
    est = limit_via_transformation(s, chosen, _orders(sc, "variable-transformation", orders, lo=0 if s.order == 0 else 1))
    _limit_rows(b, "variable-transformation", est)


def _run_factor(b, orders):
    s = b.scenario.series
    for k in _orders(b.scenario, "factor", orders, lo=2):
        conventions = (UNIT_NODE, A1_OVER_A0) if k % 2 else (UNIT_NODE,)
        for conv in conventions:
            method = "factor" if k % 2 == 0 else f"factor-{conv}"
            try:
                approx = build_factor(s.truncate(k), conv)
                amp, ex = factor_asymptote(approx)
            except (OrderUnavailable, BranchError) as exc:
                b.row(k, method, None, UNAVAILABLE, str(exc))
                continue
            b.row(k, method, amp, OK, f"asymptote exponent {_text(ex, 6)}")
            b.dump(f"{method} k={k}", _factor_pairs(approx) + [("amplitude", amp), ("exponent", ex)])


def _run_iterated(b):
    stages = build_root_iterated(b.scenario.series)
    if not stages:
        b.notes.append("iterated-root: stage 1 unavailable")
    for st in stages:
        k = 2 * st.depth
        try:
            amp, ex = root_asymptote(st)
        except BranchError as exc:
            b.row(k, "iterated-root", None, UNAVAILABLE, str(exc))
            continue
        b.row(k, "iterated-root", amp, OK, f"asymptote exponent {_text(ex, 6)}")
        pairs = []
        for i, (a, n, m) in enumerate(zip(st.amplitudes, st.exponents, st.powers), 1):
            pairs += [(f"A{i} (power {m})", a), (f"exponent{i}", n)]
        b.dump(f"iterated-root k={k}", pairs + [("amplitude", amp), ("exponent", ex)])


def _anchor_for_bootstrap(sc):
    n = sc.options.get("bootstrap_anchor_terms")
    terms = sc.asymptote.terms if n is None else sc.asymptote.terms[:n]
    return StrongCouplingExpansion(terms)


def _raw_offset(series) -> int:
    """Index shift between normalized order m and the raw coefficient label."""
    ex = series.prefactor.exponent / series.power_step
    return int(ex) if ex.denominator == 1 else 0


def _run_bootstrap(b):
    sc = b.scenario
    if sc.asymptote is None:
        b.notes.append("bootstrap: inapplicable (no strong-coupling expansion)")
        return
    anchor = _anchor_for_bootstrap(sc)
    s = sc.series
    offset = _raw_offset(s)
    amp = mpf(s.prefactor.amplitude)
    depth0 = s.order + 1 + len(anchor.terms) - 1
    max_depth = int(sc.options.get("max_depth", depth0 + 2))
    seq = bootstrap_sequence(s, anchor, max_depth)
    for root, used, pred in seq:
        b.dump(f"bootstrap depth={root.depth}", _ladder_pairs(root))
        if pred is not None:
            idx = used.order + 1 + offset
            ref = sc.reference(f"a{idx}*")
            b.row(used.order + 1, "bootstrap-prediction", amp * pred, OK, f"a{idx}*", ref=ref)
    if len(seq) < max_depth - depth0 + 1:
        b.notes.append(f"bootstrap: stopped at depth {seq[-1][0].depth if seq else '-'}")
    # ladders rebuilt from the published coefficient predictions
    current = s
    for extra in range(1, max_depth - depth0 + 1):
        idx = current.order + 1 + offset
        ref = sc.reference(f"a{idx}*")
        if ref is None:
            break
        current = current.extend(mpf(ref.value) / amp)
        try:
            root = build_root_interpolant(current, anchor)
        except DepthUnavailable as exc:
            b.notes.append(f"bootstrap with published a{idx}*: {exc}")
            break
        b.dump(f"published-input depth={root.depth}", _ladder_pairs(root))
        if root.depth < max_depth:
            nxt = predict_next_coefficient(root, current)
            nidx = current.order + 1 + offset
            b.row(current.order + 1, "published-input-prediction", amp * nxt, OK, f"a{nidx}*",
                  ref=sc.reference(f"a{nidx}*"))


def _ladder_pairs(root):
    pairs = []
    for i, (a, n) in enumerate(zip(root.amplitudes, root.exponents), 1):
        pairs += [(f"A{i}", a), (f"n{i}", n)]
    return pairs


def _run_interpolant(b):
    sc = b.scenario
    if sc.asymptote is None:
        b.notes.append("interpolant: inapplicable (no strong-coupling expansion)")
        return
    k = int(sc.options.get("interpolant_order", sc.series.order))
    try:
        root = build_root_interpolant(sc.series.truncate(k), sc.asymptote)
        amp, ex = root_asymptote(root)
    except (DepthUnavailable, BranchError) as exc:
        b.row(k, "interpolant", None, UNAVAILABLE, str(exc))
        return
    b.row(k, "interpolant", amp, INFO, f"weak-coupling amplitude, exponent {_text(ex, 6)}")
    b.dump(f"interpolant depth={root.depth}", _ladder_pairs(root))


def _run_interpolating_factor(b, orders):
    sc = b.scenario
    if sc.asymptote is None:
        b.notes.append("interpolating-factor: inapplicable (no strong-coupling expansion)")
        return
    for k in _orders(sc, "interpolating-factor", orders, lo=2):
        try:
            approx = build_factor_interpolating(sc.series.truncate(k), sc.asymptote)
            amp, ex = factor_asymptote(approx)
        except (OrderUnavailable, BranchError) as exc:
            b.row(k + 1, "interpolating-factor", None, UNAVAILABLE, str(exc))
            continue
        b.row(k + 1, "interpolating-factor", amp, OK, f"{k}+1; exponent {_text(ex, 6)}")
        b.dump(f"interpolating-factor {k}+1", _factor_pairs(approx) + [("limit", amp)])


def run_scenario(scenario: Scenario, pipelines=None, orders=None, omega=None) -> ScenarioReport:
    """Run the requested pipelines (default: the scenario's own) and collect a report."""
    b = _Builder(scenario)
    for name in pipelines or scenario.pipelines:
        try:
            if name == "power-restriction":
                _run_power_restriction(b, orders)
            elif name == "variable-transformation":
                _run_variable_transformation(b, orders, omega)
            elif name == "factor":
                _run_factor(b, orders)
            elif name == "iterated-root":
                _run_iterated(b)
            elif name == "bootstrap":
                _run_bootstrap(b)
            elif name == "interpolant":
                _run_interpolant(b)
            elif name == "interpolating-factor":
                _run_interpolating_factor(b, orders)
            else:
                raise ValueError(f"unknown pipeline {name!r}")
        except (SelfSimError, ValueError) as exc:
            if isinstance(exc, ValueError) and str(exc).startswith("unknown pipeline"):
                raise
            b.notes.append(f"{name}: {exc}")
    ref = b.reference
    return ScenarioReport(
        scenario.name,
        tuple(b.rows),
        tuple(b.finals),
        (ref.label, ref.value, ref.source) if ref else None,
        b.parameters,
        tuple(b.notes),
    )


# --------------------------------------------------------------------------
# serialization
# --------------------------------------------------------------------------


def _short(v) -> str:
    """Four decimals like the published tables; scientific for tiny or huge values."""
    if v is None:
        return "-"
    x = to_float(v)
    if x == 0 or 1e-3 <= abs(x) < 1e4:
        return f"{x:.4f}"
    return f"{x:.4e}"


def _err(e) -> str:
    return "-" if e is None else f"{e:+.4g}"


def _full(v):
    if v is None:
        return None
    return ctx.nstr(mpf(v), _JSON_DIGITS)


def emit_report(report: ScenarioReport, format: str = "table-text") -> str:
    if not report.rows and not report.finals:
        raise ValueError("report has no rows")
    if format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "method", "value", "error_percent", "status"])
        for r in report.rows:
            w.writerow(["" if r.k is None else r.k, r.method, _short(r.value), _err(r.error_percent), r.status])
        for f in report.finals:
            w.writerow(["final", f.method, _short(f.value), _err(f.error_percent), "final"])
        return buf.getvalue()
    if format == "json-doc":
        doc = {
            "scenario": report.scenario,
            "reference": None if report.reference is None else {
                "label": report.reference[0], "value": _full(report.reference[1]), "source": report.reference[2],
            },
            "rows": [
                {"k": r.k, "method": r.method, "value": _full(r.value), "error_percent": r.error_percent,
                 "status": r.status, "note": r.note}
                for r in report.rows
            ],
            "finals": [
                {"method": f.method, "value": _full(f.value), "error_percent": f.error_percent, "note": f.note}
                for f in report.finals
            ],
            "parameters": report.parameters,
            "annotations": list(report.annotations),
        }
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if format == "table-text":
        lines = [f"scenario: {report.scenario}"]
        if report.reference is not None:
            label, value, source = report.reference
            lines.append(f"reference: {label} = {ctx.nstr(mpf(value), 8)} ({source})")
        lines.append(f"{'k':>3}  {'method':<28} {'value':>12} {'error %':>10}  {'status':<11} note")
        for r in report.rows:
            k = "" if r.k is None else str(r.k)
            lines.append(f"{k:>3}  {r.method:<28} {_short(r.value):>12} {_err(r.error_percent):>10}  {r.status:<11} {r.note}".rstrip())
        for f in report.finals:
            lines.append(f"{'fin':>3}  {f.method:<28} {_short(f.value):>12} {_err(f.error_percent):>10}  {'final':<11} {f.note}".rstrip())
        for block in sorted(report.parameters):
            items = ", ".join(f"{k}={v}" for k, v in report.parameters[block].items())
            lines.append(f"[{block}] {items}")
        for note in report.annotations:
            lines.append(f"note: {note}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")


def load_report(text: str) -> ScenarioReport:
    """Inverse of ``emit_report(..., "json-doc")``."""
    doc = json.loads(text)

    def val(v):
        return None if v is None else ctx.mpf(v)

    ref = doc.get("reference")
    return ScenarioReport(
        doc["scenario"],
        tuple(ReportRow(r["k"], r["method"], val(r["value"]), r["error_percent"], r["status"], r["note"]) for r in doc["rows"]),
        tuple(FinalRow(f["method"], val(f["value"]), f["error_percent"], f["note"]) for f in doc["finals"]),
        None if ref is None else (ref["label"], val(ref["value"]), ref["source"]),
        doc["parameters"],
        tuple(doc["annotations"]),
    )


def render_comparison(report: ScenarioReport, methods=("power-restriction", "variable-transformation")) -> str:
    """Side-by-side per-order table of two limit methods with their errors."""
    cols = {m: {r.k: r for r in report.rows_for(m)} for m in methods}
    ks = sorted({k for c in cols.values() for k in c})
    head = f"{'k':>3}" + "".join(f"  {m:>24} {'error %':>9}" for m in methods)
    lines = [head]
    for k in ks:
        line = f"{k:>3}"
        for m in methods:
            r = cols[m].get(k)
            mark = "*" if r is not None and r.status == FILLED else " "
            line += f"  {_short(r.value if r else None) + mark:>24} {_err(r.error_percent if r else None):>9}"
        lines.append(line)
    line = f"{'fin':>3}"
    for m in methods:
        f = report.final_for(m)
        line += f"  {_short(f.value if f else None) + ' ':>24} {_err(f.error_percent if f else None):>9}"
    lines.append(line)
    lines.append("* unavailable at this order; filled with the mean of its neighbours")
    return "\n".join(lines) + "\n"
