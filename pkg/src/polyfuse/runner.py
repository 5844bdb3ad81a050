"""Execution of parsed programs and rendering of run reports.

Each statement produces a structured result; verify statements build matrix
realizations, measure residuals, and compare them against the pinned
tolerances below.  A run report knows whether every verification passed,
which is what drives the CLI exit status.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Union

from .coeffring import CoeffExpr, P0Poly
from .algebra import PolyAlgebra, builtin, builtin_names, casimir, solve_g, \
    EnvelopeElement
from .fusion import FusedAlgebra, FusionKind, fuse, specialize, \
    SpecializationError
from .dsl import DslProgram, AlgebraDef, LetFuse, LetSpecialize, Query, \
    Verify, Statement
from . import matrixrep
from .matrixrep import Rep, ResidualReport, rep_su2, rep_su11, rep_boson, \
    rep_fused, verify_relations, verify_casimir, verify_symbol_centrality, \
    eval_envelope
from .render import render_poly, render_envelope, coeff_to_text

# Residual tolerances.  An entry passes when its interior residual is
# within tolerance either absolutely or after normalizing by the magnitude
# of the matrices being compared: absolute residuals of a correct relation
# grow with the matrix entries (hence with the cutoff) through float
# roundoff, while genuine violations keep a scale-relative residual many
# orders of magnitude above these thresholds.
TOL_EXACT = 1e-13      # untruncated irreps (su2)
TOL_TRUNCATED = 1e-10  # truncated base realizations (boson, su11)
TOL_FUSED = 1e-9       # tensor-product realizations of fused algebras
TOL_CENTRAL = 1e-12    # centrality of symbol matrices (Lambda, Casimirs)

# verify parameters: j for su2, k for su11, cutoff for boson/su11, mu for
# the fusion coupling; j2/k2/cutoff2 override the second factor.
DEFAULT_PARAMS: dict[str, Fraction] = {
    "j": Fraction(2),
    "k": Fraction(1),
    "cutoff": Fraction(12),
    "mu": Fraction(1),
}
ALLOWED_PARAMS = frozenset(DEFAULT_PARAMS) | {"j2", "k2", "cutoff2"}


class ExecutionError(ValueError):
    def __init__(self, message: str, pos: tuple[int, int] = (0, 0)):
        self.pos = pos
        line, col = pos
        prefix = f"line {line}, col {col}: " if line else ""
        super().__init__(prefix + message)


Defined = Union[PolyAlgebra, FusedAlgebra]


@dataclass
class AlgebraResult:
    name: str
    phi: P0Poly
    order: int | None
    g: P0Poly
    casimir_element: EnvelopeElement


@dataclass
class FusionResult:
    name: str
    kind: str
    left: str
    right: str
    phi: P0Poly
    order: int | None
    ledger: dict[str, str]


@dataclass
class SpecializeResult:
    name: str
    source: str
    phi: P0Poly
    order: int | None


@dataclass
class QueryResult:
    what: str
    target: str
    value: object  # P0Poly, EnvelopeElement, int | None, or list[str]


@dataclass
class VerifyResult:
    target: str
    params: dict[str, Fraction]
    reports: list[ResidualReport]
    tolerances: dict[str, float]
    failures: list[str]

    @property
    def passed(self) -> bool:
        return not self.failures


RunResultItem = Union[AlgebraResult, FusionResult, SpecializeResult,
                      QueryResult, VerifyResult]


@dataclass
class RunReport:
    results: list[RunResultItem] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results
                   if isinstance(r, VerifyResult))


def _algebra_of(obj: Defined) -> PolyAlgebra:
    return obj.algebra if isinstance(obj, FusedAlgebra) else obj


class Runner:
    def __init__(self, base_params: Mapping[str, Fraction] | None = None):
        self.names: dict[str, Defined] = {n: builtin(n) for n in builtin_names()}
        self.base_params = dict(base_params or {})
        for key in self.base_params:
            if key not in ALLOWED_PARAMS:
                raise ExecutionError(
                    f"unknown verify parameter {key!r} "
                    f"(allowed: {', '.join(sorted(ALLOWED_PARAMS))})")

    def run(self, program: DslProgram) -> RunReport:
        report = RunReport()
        for statement in program.statements:
            report.results.append(self.execute(statement))
        return report

    def execute(self, statement: Statement) -> RunResultItem:
        if isinstance(statement, AlgebraDef):
            alg = PolyAlgebra(name=statement.name, phi=statement.phi)
            self.names[statement.name] = alg
            return AlgebraResult(name=alg.name, phi=alg.phi, order=alg.order,
                                 g=solve_g(alg.phi),
                                 casimir_element=casimir(alg))
        if isinstance(statement, LetFuse):
            left = _algebra_of(self.names[statement.left])
            right = _algebra_of(self.names[statement.right])
            fused = fuse(FusionKind(statement.kind), left, right,
                         name=statement.name)
            self.names[statement.name] = fused
            return FusionResult(name=statement.name, kind=statement.kind,
                                left=statement.left, right=statement.right,
                                phi=fused.algebra.phi,
                                order=fused.algebra.order,
                                ledger=fused.central_ledger())
        if isinstance(statement, LetSpecialize):
            source = self.names[statement.source]
            source_alg = _algebra_of(source)
            assignments = dict(statement.assignments)
            unknown = sorted(set(assignments) - source_alg.centrals)
            if unknown:
                raise ExecutionError(
                    f"{', '.join(unknown)}: not central symbol(s) of "
                    f"{statement.source!r} (has: "
                    f"{', '.join(sorted(source_alg.centrals)) or 'none'})",
                    statement.pos)
            try:
                alg = specialize(source, assignments, name=statement.name)
            except SpecializationError as exc:
                raise ExecutionError(str(exc), statement.pos) from exc
            self.names[statement.name] = alg
            return SpecializeResult(name=statement.name,
                                    source=statement.source,
                                    phi=alg.phi, order=alg.order)
        if isinstance(statement, Query):
            target = _algebra_of(self.names[statement.target])
            value: object
            if statement.what == "phi":
                value = target.phi
            elif statement.what == "g":
                value = solve_g(target.phi)
            elif statement.what == "casimir":
                value = casimir(target)
            elif statement.what == "order":
                value = target.order
            else:
                value = sorted(target.centrals)
            return QueryResult(what=statement.what, target=statement.target,
                               value=value)
        if isinstance(statement, Verify):
            return self.execute_verify(statement)
        raise TypeError(f"not a statement: {statement!r}")

    # verification -------------------------------------------------------

    def execute_verify(self, statement: Verify) -> VerifyResult:
        params = dict(DEFAULT_PARAMS)
        params.update(self.base_params)
        for key, value in statement.params:
            if key not in ALLOWED_PARAMS:
                raise ExecutionError(
                    f"unknown verify parameter {key!r} "
                    f"(allowed: {', '.join(sorted(ALLOWED_PARAMS))})",
                    statement.pos)
            params[key] = value

        if isinstance(statement.target, str):
            target_name = statement.target
            obj = self.names[target_name]
        else:
            kind, left, right = statement.target
            obj = fuse(FusionKind(kind),
                       _algebra_of(self.names[left]),
                       _algebra_of(self.names[right]),
                       name=f"fuse({kind}, {left}, {right})")
            target_name = obj.algebra.name

        rep = self._realize(obj, params, statement.pos, second_factor=False)
        alg = _algebra_of(obj)
        tolerance = self._tolerance_for(obj, rep)
        tolerances = {"relations": tolerance, "casimir": tolerance,
                      "centrality": TOL_CENTRAL}

        reports = [verify_relations(rep, alg), verify_casimir(rep, alg),
                   verify_symbol_centrality(rep)]
        failures: list[str] = []
        for report, tol_key in zip(reports, ("relations", "casimir",
                                             "centrality")):
            tol = tolerances[tol_key]
            for entry in report.entries:
                if entry.interior > tol and entry.relative > tol:
                    failures.append(
                        f"{report.target}: {entry.relation} interior residual "
                        f"{entry.interior:.3e} (relative {entry.relative:.3e})"
                        f" exceeds {tol:.0e}")
        return VerifyResult(target=target_name, params=params,
                            reports=reports, tolerances=tolerances,
                            failures=failures)

    def _tolerance_for(self, obj: Defined, rep: Rep) -> float:
        if isinstance(obj, FusedAlgebra):
            return TOL_FUSED
        return TOL_EXACT if rep.exact_interior.is_full(rep.dim) \
            else TOL_TRUNCATED

    def _realize(self, obj: Defined, params: Mapping[str, Fraction],
                 pos: tuple[int, int], second_factor: bool) -> Rep:
        def param(name: str) -> Fraction:
            if second_factor and f"{name}2" in params:
                return params[f"{name}2"]
            return params[name]

        def int_param(name: str) -> int:
            value = param(name)
            if value.denominator != 1:
                raise ExecutionError(f"parameter {name} must be an integer, "
                                     f"got {value}", pos)
            return int(value)

        if isinstance(obj, FusedAlgebra):
            left = self.names.get(obj.source_l)
            right = self.names.get(obj.source_m)
            if left is None or right is None:
                raise ExecutionError(
                    f"cannot realize {obj.algebra.name!r}: unknown factor "
                    f"algebra(s)", pos)
            rep_l = self._realize(left, params, pos, second_factor=False)
            rep_m = self._realize(right, params, pos, second_factor=True)
            rep = rep_fused(obj.kind, rep_l, rep_m,
                            mu_value=float(params["mu"]), fused=obj)
            # fill in this realization's own Casimir so it can in turn be
            # fused (nested fusion)
            rep.casimir_matrix = eval_envelope(casimir(obj.algebra), rep)
            return rep
        if obj.name == "su2":
            try:
                return rep_su2(param("j"))
            except matrixrep.RepError as exc:
                raise ExecutionError(str(exc), pos) from exc
        if obj.name == "su11":
            try:
                return rep_su11(param("k"), int_param("cutoff"))
            except matrixrep.RepError as exc:
                raise ExecutionError(str(exc), pos) from exc
        if obj.name == "boson":
            try:
                return rep_boson(int_param("cutoff"))
            except matrixrep.RepError as exc:
                raise ExecutionError(str(exc), pos) from exc
        raise ExecutionError(
            f"no finite matrix model for {obj.name!r}; verifiable targets "
            f"are boson, su2, su11, and fusions built from them", pos)


def run(program: DslProgram,
        base_params: Mapping[str, Fraction] | None = None) -> RunReport:
    return Runner(base_params).run(program)


# -- report rendering ---------------------------------------------------

def _value_to_mode(value: object, mode: str):
    if isinstance(value, P0Poly):
        return render_poly(value, mode)
    if isinstance(value, EnvelopeElement):
        return render_envelope(value, mode)
    if isinstance(value, CoeffExpr):
        return coeff_to_text(value) if mode != "json" else \
            render_poly(P0Poly.constant(value), mode)
    return value


def render_report(report: RunReport, mode: str) -> str | dict:
    """Whole-report rendering: text and latex give a printable string,
    json gives one JSON-serializable dict."""
    if mode not in ("text", "json", "latex"):
        raise ValueError(f"unknown output mode {mode!r}")
    if mode == "json":
        return {"ok": report.ok,
                "results": [_result_json(r) for r in report.results]}
    lines: list[str] = []
    for result in report.results:
        lines.extend(_result_lines(result, mode))
    lines.append(f"result: {'ok' if report.ok else 'VERIFICATION FAILED'}")
    return "\n".join(lines) + "\n"


def _result_json(result: RunResultItem) -> dict:
    if isinstance(result, AlgebraResult):
        return {"kind": "algebra", "name": result.name,
                "order": result.order,
                "phi": render_poly(result.phi, "json"),
                "g": render_poly(result.g, "json"),
                "casimir": render_envelope(result.casimir_element, "json")}
    if isinstance(result, FusionResult):
        return {"kind": "fusion", "name": result.name,
                "fusion_kind": result.kind,
                "left": result.left, "right": result.right,
                "order": result.order,
                "phi": render_poly(result.phi, "json"),
                "centrals": result.ledger}
    if isinstance(result, SpecializeResult):
        return {"kind": "specialization", "name": result.name,
                "source": result.source, "order": result.order,
                "phi": render_poly(result.phi, "json")}
    if isinstance(result, QueryResult):
        return {"kind": "query", "query": result.what,
                "target": result.target,
                "value": _value_to_mode(result.value, "json")}
    if isinstance(result, VerifyResult):
        return {"kind": "verify", "target": result.target,
                "params": {k: str(v) for k, v in result.params.items()},
                "tolerances": result.tolerances,
                "pass": result.passed,
                "failures": result.failures,
                "reports": [r.to_dict() for r in result.reports]}
    raise TypeError(f"not a result: {result!r}")


def _result_lines(result: RunResultItem, mode: str) -> list[str]:
    if isinstance(result, AlgebraResult):
        return [f"algebra {result.name} (order {result.order})",
                f"  phi = {_value_to_mode(result.phi, mode)}",
                f"  g = {_value_to_mode(result.g, mode)}",
                f"  casimir = {_value_to_mode(result.casimir_element, mode)}"]
    if isinstance(result, FusionResult):
        lines = [f"fused {result.name} = fuse({result.kind}, {result.left}, "
                 f"{result.right}) (order {result.order})",
                 f"  phi = {_value_to_mode(result.phi, mode)}",
                 "  central symbols:"]
        lines += [f"    {sym}: {meaning}"
                  for sym, meaning in sorted(result.ledger.items())]
        return lines
    if isinstance(result, SpecializeResult):
        return [f"specialized {result.name} from {result.source} "
                f"(order {result.order})",
                f"  phi = {_value_to_mode(result.phi, mode)}"]
    if isinstance(result, QueryResult):
        value = _value_to_mode(result.value, mode)
        if isinstance(value, list):
            value = ", ".join(value) or "(none)"
        return [f"{result.what} {result.target} = {value}"]
    if isinstance(result, VerifyResult):
        rendered_params = ", ".join(f"{k}={v}" for k, v in
                                    sorted(result.params.items()))
        lines = [f"verify {result.target} [{rendered_params}]"]
        for report in result.reports:
            for entry in report.entries:
                boundary = ("" if entry.boundary is None
                            else f", boundary {entry.boundary:.3e}")
                lines.append(f"  {report.target}: {entry.relation} "
                             f"interior {entry.interior:.3e}{boundary}")
        lines.append(f"  {'PASS' if result.passed else 'FAIL'}")
        lines.extend(f"  {failure}" for failure in result.failures)
        return lines
    raise TypeError(f"not a result: {result!r}")
