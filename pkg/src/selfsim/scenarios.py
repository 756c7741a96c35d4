"""Benchmark scenarios, input documents and small reference helpers."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction

from ._numeric import ctx, exact, mpf, number
from .errors import ScenarioSchemaError
from .root import StrongCouplingExpansion
from .series import AsymptoticSeries, PowerPrefactor, binomial_series

__all__ = [
    "Reference",
    "Scenario",
    "BUILTIN_SCENARIOS",
    "load_scenario",
    "scenario_from_document",
    "exact_string_energy",
    "string_energy_limit",
    "string_coefficients",
    "percentage_error",
]

PIPELINES = (
    "factor",
    "iterated-root",
    "bootstrap",
    "interpolant",
    "interpolating-factor",
    "power-restriction",
    "variable-transformation",
)


@dataclass(frozen=True)
class Reference:
    label: str
    value: object
    source: str
    uncertainty: object = None

    def __post_init__(self):
        if not self.source:
            raise ValueError(f"reference {self.label!r} needs a source")


@dataclass(frozen=True)
class Scenario:
    name: str
    series: AsymptoticSeries
    asymptote: StrongCouplingExpansion | None = None
    references: tuple = ()
    pipelines: tuple = ()
    # preferred reference label for percentage errors of limit values
    primary_reference: str | None = None
    # declared approach exponent (value, source); estimated when absent
    omega: tuple | None = None
    orders: dict = field(default_factory=dict)
    fixtures: dict = field(default_factory=dict, compare=False)
    options: dict = field(default_factory=dict)
    notes: tuple = ()

    def reference(self, label: str) -> Reference | None:
        for ref in self.references:
            if ref.label == label:
                return ref
        return None


# --------------------------------------------------------------------------
# oracles and metrics
# --------------------------------------------------------------------------


def exact_string_energy(g):
    """Ground-state energy of the particle-in-a-box string model in closed form."""
    g = mpf(g)
    if g <= 0:
        raise ValueError("g must be positive")
    return ctx.pi**2 / (8 * g**2) * (1 + g**2 / 32 + g / 4 * ctx.sqrt(1 + g**2 / 64))


def string_energy_limit():
    return ctx.pi**2 / 128


def string_coefficients(order: int) -> list:
    """Exact weak-coupling coefficients of the closed-form string energy (times 8 g**2 / pi**2)."""
    a = [Fraction(0)] * (order + 1)
    a[0] += 1
    if order >= 2:
        a[2] += Fraction(1, 32)
    for j, c in enumerate(binomial_series(Fraction(1, 64), Fraction(1, 2), order)):
        if 2 * j + 1 <= order:
            a[2 * j + 1] += c / 4
    return a


def percentage_error(value, reference) -> float:
    """(value - reference) / reference * 100."""
    if reference == 0:
        raise ValueError("reference value must be nonzero")
    return float((mpf(value) - mpf(reference)) / mpf(reference) * 100)


# --------------------------------------------------------------------------
# built-in scenarios
# --------------------------------------------------------------------------


def _polaron() -> Scenario:
    series = AsymptoticSeries.from_raw(1, 1, ["-1", "-1.591962e-2", "-0.806070e-3"])
    return Scenario(
        name="polaron",
        series=series,
        asymptote=StrongCouplingExpansion((("-0.108513", 2),)),
        references=(
            Reference("a4*", Fraction("-5.014168e-5"), "published bootstrap prediction, order 4"),
            Reference("a5*", Fraction("-3.312472e-6"), "published bootstrap prediction, order 5"),
            Reference("B", Fraction("-0.108513"), "Miyake strong-coupling limit"),
        ),
        pipelines=("bootstrap",),
        options={"max_depth": 5},
    )


def _lieb_liniger() -> Scenario:
    tg = ctx.pi**2 / 3
    series = AsymptoticSeries.from_raw(1, 1, [1, "-0.424413", "0.065352", "-0.017201"], Fraction(1, 2))
    return Scenario(
        name="lieb-liniger",
        series=series,
        asymptote=StrongCouplingExpansion(((tg, 0), (-4 * tg, -1), (12 * tg, -2))),
        references=(
            Reference("pi^2/3", tg, "Tonks-Girardeau limit"),
            Reference("a6*", Fraction("5.153629e-3"), "published bootstrap prediction, order 6"),
        ),
        pipelines=("bootstrap", "interpolant"),
        primary_reference="pi^2/3",
        # the three-term interpolant uses the series through a4 only
        options={"max_depth": 5, "bootstrap_anchor_terms": 1, "interpolant_order": 2},
    )


def _fermi_gas() -> Scenario:
    series = AsymptoticSeries.from_raw(
        1, 0, ["3/10", -1 / (3 * ctx.pi), "0.055661", "-0.00914", "-0.018604"]
    )
    return Scenario(
        name="fermi-gas",
        series=series,
        asymptote=StrongCouplingExpansion((("0.132", 0),)),
        references=(
            Reference("a0", Fraction(3, 10), "free Fermi gas energy"),
            Reference("unitary", Fraction("0.132"), "unitary-limit energy"),
        ),
        pipelines=("interpolating-factor",),
        primary_reference="unitary",
        orders={"interpolating-factor": [3, 4]},
    )


def _oscillator() -> Scenario:
    raw = ["0.5", "0.75", "-2.625", "20.8125", "-241.2890625", "3580.98046875", "-63982.8134766", "1329733.72705"]
    return Scenario(
        name="oscillator",
        series=AsymptoticSeries.from_raw(1, 0, raw),
        pipelines=("factor", "iterated-root"),
        orders={"factor": [5, 6]},
    )


_STRING_BETA = (
    Fraction(1), Fraction(-1, 8), Fraction(0), Fraction(1, 1024), Fraction(0),
    Fraction(-3, 262144), Fraction(0), Fraction(5, 33554432), Fraction(0),
    Fraction(-35, 17179869184),
)
_STRING_TRANSFORMED = (
    Fraction(1), Fraction(-3, 4), Fraction(-3, 32), Fraction(-15, 512),
    Fraction(-15, 1024), Fraction(-1185, 131072), Fraction(-1635, 262144),
    Fraction(-77295, 16777216), Fraction(-119595, 33554432),
    Fraction(-24489285, 8589934592),
)


def _string() -> Scenario:
    series = AsymptoticSeries(PowerPrefactor(ctx.pi**2 / 8, -2), tuple(string_coefficients(15)))
    return Scenario(
        name="string",
        series=series,
        references=(Reference("exact", string_energy_limit(), "closed-form limit pi^2/128"),),
        pipelines=("power-restriction", "variable-transformation"),
        primary_reference="exact",
        omega=(Fraction(2), "large-g tail of the closed-form energy decays as g**-2"),
        orders={"power-restriction": list(range(3, 16)), "variable-transformation": list(range(3, 16))},
        fixtures={
            "beta_coefficients": _STRING_BETA,
            "transformed_coefficients_omega_2": _STRING_TRANSFORMED,
        },
    )


def _membrane() -> Scenario:
    raw = ["1", "0.25", "0.03125", "2.176347e-3", "0.552721e-4", "-0.721482e-5", "-1.777848e-6"]
    series = AsymptoticSeries(PowerPrefactor(ctx.pi**2 / 8, -2), tuple(Fraction(c) for c in raw))
    return Scenario(
        name="membrane",
        series=series,
        references=(
            Reference("monte-carlo", Fraction("0.0798"), "Gompper-Kroll Monte Carlo", Fraction("0.0003")),
        ),
        pipelines=("power-restriction", "variable-transformation"),
        primary_reference="monte-carlo",
        orders={"power-restriction": list(range(1, 7)), "variable-transformation": [4, 5, 6]},
        fixtures={
            "beta_coefficients": (
                Fraction(1), Fraction(-1, 8), Fraction(0), Fraction("0.64173e-3"),
                Fraction("0.10668e-5"), Fraction("0.46253e-5"), Fraction("0.18454e-5"),
            ),
        },
    )


BUILTIN_SCENARIOS = {
    "polaron": _polaron,
    "lieb-liniger": _lieb_liniger,
    "fermi-gas": _fermi_gas,
    "oscillator": _oscillator,
    "string": _string,
    "membrane": _membrane,
}


# --------------------------------------------------------------------------
# input documents
# --------------------------------------------------------------------------


def _num(value, field_name):
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise ScenarioSchemaError(field_name, "expected a number or decimal string")
    if isinstance(value, float):
        value = repr(value)
    try:
        return number(value)
    except (ValueError, ArithmeticError) as exc:
        raise ScenarioSchemaError(field_name, f"not a number: {value!r}") from exc


def scenario_from_document(doc: dict, name: str = "input") -> Scenario:
    """Validate a parsed input document and build a Scenario from it."""
    if not isinstance(doc, dict):
        raise ScenarioSchemaError("<document>", "expected an object at top level")
    known = {"name", "prefactor", "power_step", "coefficients", "asymptote", "references", "omega", "pipelines", "orders"}
    extra = sorted(set(doc) - known)
    if extra:
        raise ScenarioSchemaError(extra[0], "unknown field")

    pre = doc.get("prefactor", {"amplitude": "1", "exponent": "0"})
    if not isinstance(pre, dict):
        raise ScenarioSchemaError("prefactor", "expected an object with amplitude and exponent")
    if "amplitude" not in pre:
        raise ScenarioSchemaError("prefactor.amplitude", "missing")
    amplitude = _num(pre["amplitude"], "prefactor.amplitude")
    exponent = _num(pre.get("exponent", "0"), "prefactor.exponent")
    if exact(exponent) is None:
        raise ScenarioSchemaError("prefactor.exponent", "must be a rational number")
    if amplitude == 0:
        raise ScenarioSchemaError("prefactor.amplitude", "must be nonzero")

    q = _num(doc.get("power_step", "1"), "power_step")
    if exact(q) is None or q <= 0:
        raise ScenarioSchemaError("power_step", "must be a positive rational")

    coeffs = doc.get("coefficients")
    if not isinstance(coeffs, list) or not coeffs:
        raise ScenarioSchemaError("coefficients", "expected a non-empty list")
    coeffs = [_num(c, f"coefficients[{i}]") for i, c in enumerate(coeffs)]
    if coeffs[0] == 0:
        raise ScenarioSchemaError("coefficients[0]", "leading coefficient must be nonzero")
    notes = ()
    if coeffs[0] != 1:
        notes = (f"a0 = {coeffs[0]} folded into the prefactor amplitude",)
    series = AsymptoticSeries.from_raw(amplitude, exponent, coeffs, q)

    asymptote = None
    if doc.get("asymptote") is not None:
        terms = doc["asymptote"]
        if not isinstance(terms, list) or not terms:
            raise ScenarioSchemaError("asymptote", "expected a non-empty list of {b, alpha}")
        parsed = []
        for i, t in enumerate(terms):
            if not isinstance(t, dict) or "b" not in t or "alpha" not in t:
                raise ScenarioSchemaError(f"asymptote[{i}]", "expected an object with b and alpha")
            parsed.append((_num(t["b"], f"asymptote[{i}].b"), _num(t["alpha"], f"asymptote[{i}].alpha")))
        try:
            asymptote = StrongCouplingExpansion(tuple(parsed))
        except ValueError as exc:
            raise ScenarioSchemaError("asymptote", str(exc)) from exc

    refs = []
    for i, r in enumerate(doc.get("references") or []):
        if not isinstance(r, dict):
            raise ScenarioSchemaError(f"references[{i}]", "expected an object")
        for key in ("label", "value", "source"):
            if key not in r:
                raise ScenarioSchemaError(f"references[{i}].{key}", "missing")
        if not isinstance(r["source"], str) or not r["source"].strip():
            raise ScenarioSchemaError(f"references[{i}].source", "must be a non-empty string")
        refs.append(Reference(str(r["label"]), _num(r["value"], f"references[{i}].value"), r["source"]))

    omega = None
    if doc.get("omega") is not None:
        w = _num(doc["omega"], "omega")
        if w <= 0:
            raise ScenarioSchemaError("omega", "must be positive")
        omega = (w, "declared in input document")

    pipelines = doc.get("pipelines")
    if pipelines is not None:
        if not isinstance(pipelines, list) or any(p not in PIPELINES for p in pipelines):
            raise ScenarioSchemaError("pipelines", f"expected a list drawn from {', '.join(PIPELINES)}")
        pipelines = tuple(pipelines)
    else:
        pipelines = default_pipelines(series, asymptote)

    return Scenario(
        name=str(doc.get("name", name)),
        series=series,
        asymptote=asymptote,
        references=tuple(refs),
        pipelines=pipelines,
        primary_reference=refs[0].label if refs else None,
        omega=omega,
        notes=notes,
    )


def default_pipelines(series: AsymptoticSeries, asymptote=None) -> tuple:
    out = []
    if series.prefactor.exponent < 0:
        out.append("power-restriction")
    if series.power_step == 1:
        out.append("variable-transformation")
    if asymptote is not None:
        out.append("interpolating-factor")
    if not out:
        out.append("factor")
    return tuple(out)


def load_scenario(source) -> Scenario:
    """Built-in name, path to a JSON document, or an already parsed document."""
    if isinstance(source, dict):
        return scenario_from_document(source)
    if isinstance(source, str) and source in BUILTIN_SCENARIOS:
        return BUILTIN_SCENARIOS[source]()
    if isinstance(source, (str, os.PathLike)) and os.path.exists(source):
        with open(source, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ScenarioSchemaError("<document>", f"invalid JSON: {exc}") from exc
        name = os.path.splitext(os.path.basename(str(source)))[0]
        return scenario_from_document(doc, name)
    raise ScenarioSchemaError("<source>", f"unknown scenario or missing file: {source!r}")
