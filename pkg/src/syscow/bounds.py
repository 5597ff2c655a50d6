"""Scalar curvature -> cowaist -> stable 2-systole, as exact arithmetic.

Every bound is ``q * pi^s * (named symbolic constants)`` with ``q`` rational,
returned together with a :class:`DerivationTrace` whose steps can be replayed.
Two kinds of constants stay symbolic because no numeric value is known:
the dimensional constant ``c_n`` of the K-cowaist inequality and the
transference constants ``Gamma_b`` for ``b >= 3``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from typing import Any, Callable, Sequence

from ._exact import fraction_str, to_fraction
from .charclass import line_index_cp, minimal_admissible_twist
from .errors import UnsupportedError, ValidationError
from .nonzero_combination import v_n

#: Exactly known transference constants.
EXACT_GAMMA = {1: Fraction(1), 2: Fraction(3, 2)}
#: Placeholder multiplier ``C`` in ``Gamma_b <= C b log b``; not a proven value.
DEFAULT_BANASZCZYK_C = 1.0


def parse_rational(value, what: str = "value") -> Fraction:
    """Exact rational from int, Fraction, ``"p/q"`` or decimal string.

    Non-integral floats are refused: they are usually rounded irrationals.
    """
    if isinstance(value, float) and not value.is_integer():
        raise ValidationError(
            f"{what}={value!r} is a float; pass an exact rational lower bound such as '{Fraction(value).limit_denominator(1000)}'")
    try:
        return to_fraction(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise ValidationError(
            f"{what}={value!r} is not an exact rational; supply a rational lower bound like 'p/q'") from exc


def _positive(value, what: str) -> Fraction:
    q = parse_rational(value, what)
    if q <= 0:
        raise ValidationError(f"{what} must be positive, got {q}")
    return q


Symbolic = tuple[tuple[str, int], ...]


def _merge_symbolic(*groups: Symbolic) -> Symbolic:
    acc: dict[str, int] = {}
    for g in groups:
        for name, p in g:
            acc[name] = acc.get(name, 0) + p
    return tuple(sorted((k, v) for k, v in acc.items() if v))


@dataclass(frozen=True)
class SymbolicBound:
    """``rational * pi**pi_power * prod(name**power)``."""

    rational: Fraction
    pi_power: int
    symbolic_factors: Symbolic = ()
    trace: "DerivationTrace | None" = field(default=None, compare=False, repr=False)

    @property
    def float_value(self) -> float | None:
        if self.symbolic_factors:
            return None
        return float(self.rational) * math.pi ** self.pi_power

    def without_trace(self) -> "SymbolicBound":
        return SymbolicBound(self.rational, self.pi_power, self.symbolic_factors)

    def __str__(self) -> str:
        q = self.rational
        parts = [] if (q == 1 and (self.pi_power or self.symbolic_factors)) else [str(q)]
        if self.pi_power:
            parts.append("pi" if self.pi_power == 1 else f"pi^{self.pi_power}")
        parts += [n if p == 1 else f"{n}^{p}" for n, p in self.symbolic_factors]
        return "*".join(parts)

    def to_json(self, with_trace: bool = True) -> dict[str, Any]:
        out: dict[str, Any] = {
            "q": fraction_str(self.rational),
            "pi_power": self.pi_power,
            "symbolic": [{"name": n, "power": p} for n, p in self.symbolic_factors],
            "float": self.float_value,
            "text": str(self),
        }
        if with_trace and self.trace is not None:
            out["trace"] = self.trace.to_json()
        return out


# --- trace machinery -------------------------------------------------------

def _op_acw(n: int, scal: Fraction) -> Fraction:
    return acw_upper_bound(n, scal)


def _op_scale(factors: Sequence, pi_power: int, symbolic: Symbolic = ()) -> SymbolicBound:
    q = Fraction(1)
    sym: Symbolic = tuple(tuple(s) for s in symbolic)  # type: ignore[misc]
    s = pi_power
    for f in factors:
        if isinstance(f, SymbolicBound):
            q *= f.rational
            s += f.pi_power
            sym = _merge_symbolic(sym, f.symbolic_factors)
        else:
            q *= to_fraction(f)
    return SymbolicBound(q, s, _merge_symbolic(sym))


def _op_power(base: SymbolicBound, exponent: int, divide_by: int) -> SymbolicBound:
    return SymbolicBound(base.rational ** exponent / divide_by, base.pi_power * exponent,
                         tuple((n, p * exponent) for n, p in base.symbolic_factors))


def _op_gamma_exact(b: int) -> Fraction:
    if b not in EXACT_GAMMA:
        raise UnsupportedError(f"Gamma_{b} is not known exactly")
    return EXACT_GAMMA[b]


def _op_gamma_envelope(b: int, constant: float) -> float:
    return constant * b * math.log(b) if b > 1 else 1.0


def _op_index(n: int, k: int) -> Fraction:
    return line_index_cp(n, k)


OPS: dict[str, Callable[..., Any]] = {
    "acw_upper_bound": _op_acw,
    "clifford_pair_count": lambda n: clifford_pair_count(n),
    "v_n": v_n,
    "gamma_exact": _op_gamma_exact,
    "gamma_envelope": _op_gamma_envelope,
    "line_index_cp": _op_index,
    "minimal_admissible_twist": minimal_admissible_twist,
    "scale": _op_scale,
    "power": _op_power,
}


@dataclass(frozen=True)
class Ref:
    """Input that takes the output of an earlier step."""

    step: int


@dataclass(frozen=True)
class Step:
    rule: str
    formula: str
    op: str
    inputs: dict[str, Any]
    output: Any


def _resolve(value, outputs: list):
    if isinstance(value, Ref):
        return outputs[value.step]
    if isinstance(value, list):
        return [_resolve(v, outputs) for v in value]
    return value


def _jsonable(value):
    if isinstance(value, Ref):
        return {"step": value.step}
    if isinstance(value, Fraction):
        return fraction_str(value)
    if isinstance(value, SymbolicBound):
        return value.to_json(with_trace=False)
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class DerivationTrace:
    """Ordered rule applications; each step's output feeds later steps by reference."""

    steps: list[Step] = field(default_factory=list)

    def apply(self, rule: str, formula: str, op: str, **inputs) -> Ref:
        outputs = [s.output for s in self.steps]
        out = OPS[op](**{k: _resolve(v, outputs) for k, v in inputs.items()})
        self.steps.append(Step(rule, formula, op, inputs, out))
        return Ref(len(self.steps) - 1)

    def output(self, ref: Ref):
        return self.steps[ref.step].output

    def replay(self) -> Any:
        """Recompute every step from scratch; raises if any output differs."""
        outputs: list = []
        for i, s in enumerate(self.steps):
            out = OPS[s.op](**{k: _resolve(v, outputs) for k, v in s.inputs.items()})
            if out != s.output:
                raise AssertionError(f"step {i} ({s.op}) replayed to {out!r}, recorded {s.output!r}")
            outputs.append(out)
        return outputs[-1] if outputs else None

    def to_json(self) -> list[dict[str, Any]]:
        return [{"rule": s.rule, "formula": s.formula, "op": s.op,
                 "inputs": {k: _jsonable(v) for k, v in s.inputs.items()},
                 "output": _jsonable(s.output)} for s in self.steps]

    def lines(self) -> list[str]:
        out = []
        for i, s in enumerate(self.steps):
            args = ", ".join(f"{k}={_fmt(v)}" for k, v in s.inputs.items())
            out.append(f"[{i}] {s.rule}: {s.formula}  ({s.op}({args}) = {_fmt(s.output)})")
        return out


def _fmt(v) -> str:
    if isinstance(v, Ref):
        return f"#{v.step}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _finish(trace: DerivationTrace, ref: Ref) -> SymbolicBound:
    b = trace.output(ref)
    return SymbolicBound(b.rational, b.pi_power, b.symbolic_factors, trace)


# --- the chain --------------------------------------------------------------

def clifford_pair_count(n: int) -> int:
    """Number of index pairs p < q among 2n frame vectors: ``n(2n-1)``."""
    if n < 1:
        raise ValidationError(f"half dimension must be >= 1, got {n}")
    count = n * (2 * n - 1)
    assert count == comb(2 * n, 2)
    return count


def acw_upper_bound(n: int, scal_min) -> Fraction:
    """Upper bound ``4n(2n-1)/scal_min`` on the line-bundle A-hat cowaist in dimension 2n.

    The twisted curvature term is bounded by one ``|R^L|`` per index pair,
    i.e. ``n(2n-1)`` pairs, and the Lichnerowicz formula trades ``scal/4``
    against it.
    """
    scal = _positive(scal_min, "scal_min")
    return Fraction(4 * clifford_pair_count(n)) / scal


def _gamma_input(trace: DerivationTrace, b: int, gamma, banaszczyk_c: float | None):
    """Resolve Gamma_b: configured value, exact value, or a symbolic factor."""
    if gamma is not None:
        return [_positive(gamma, f"Gamma_{b}")], ()
    if b in EXACT_GAMMA:
        return [trace.apply("transference", f"Gamma_{b} exact", "gamma_exact", b=b)], ()
    if banaszczyk_c is not None:
        trace.apply("transference", f"Gamma_{b} <= C b log b (C configured, unverified)",
                    "gamma_envelope", b=b, constant=float(banaszczyk_c))
    return [], ((f"Gamma_{b}", 1),)


def stsys_bound_s2_power(n: int, scal_min, gamma_n=None,
                         banaszczyk_c: float | None = None) -> SymbolicBound:
    """``stsys_2 <= 2 pi V_n Gamma_n * 4n(2n-1)/scal`` on (S^2)^n."""
    trace = DerivationTrace()
    scal = _positive(scal_min, "scal_min")
    acw = trace.apply("spin cowaist bound", "Acw_line <= 4n(2n-1)/min scal", "acw_upper_bound",
                      n=n, scal=scal)
    vn = trace.apply("nonzero-coordinate combination", "V_n = floor((n+1)/2) ceil((n+1)/2)",
                     "v_n", n=n)
    gam, sym = _gamma_input(trace, n, gamma_n, banaszczyk_c)
    out = trace.apply("sphere product cowaist", "stsys_2 <= 2 pi V_n Gamma_n Acw_line", "scale",
                      factors=[2, vn, *gam, acw], pi_power=1, symbolic=sym)
    return _finish(trace, out)


def _cp_line_chain(trace: DerivationTrace, n: int, scal: Fraction) -> Ref:
    if n % 2 == 0:
        raise UnsupportedError(f"CP^{n} is not spin")
    acw = trace.apply("spin cowaist bound", "Acw_line <= 4n(2n-1)/min scal", "acw_upper_bound",
                      n=n, scal=scal)
    twist = trace.apply("admissible twist", "smallest k >= 1 with int Ahat ch(O(k)) != 0",
                        "minimal_admissible_twist", n=n)
    k = trace.output(twist)
    idx = trace.apply("admissibility", f"int_CP^{n} Ahat(CP^{n}) ch(O({k}))", "line_index_cp",
                      n=n, k=twist)
    if trace.output(idx) == 0:
        raise ValidationError(f"O({k}) is not admissible on CP^{n}; refusing to emit a bound")
    # |R^L| = 2 pi |k omega| <= 2 pi k / stsys_2, hence stsys_2 <= 2 pi k Acw_line
    return trace.apply("twisted line bundle", "stsys_2 <= 2 pi k Acw_line", "scale",
                       factors=[2, twist, acw], pi_power=1)


def stsys_bound_cp_line(n: int, scal_min) -> SymbolicBound:
    """Explicit bound on CP^n (n odd) from the cheapest admissible twisted line bundle."""
    trace = DerivationTrace()
    return _finish(trace, _cp_line_chain(trace, n, _positive(scal_min, "scal_min")))


def stsys_bound_cp3(scal_min) -> SymbolicBound:
    """``stsys_2 <= 4 pi Acw_line`` on CP^3 via the twist ``O(2)`` (index 1)."""
    bound = stsys_bound_cp_line(3, scal_min)
    assert bound.trace is not None and bound.trace.steps[1].output == 2
    return bound


def kahler_volume_bound_cp_line(n: int, scal_min) -> SymbolicBound:
    """Kahler volume on CP^n (n odd): ``Vol <= (2 pi k Acw_line)^n / n!``.

    For a Kahler form ``omega = A x`` the normalized form has comass ``1/|A|``
    and ``Vol = |A|^n / n!``.
    """
    trace = DerivationTrace()
    s = _cp_line_chain(trace, n, _positive(scal_min, "scal_min"))
    out = trace.apply("Kahler volume", f"Vol <= (stsys bound)^{n} / {n}!", "power",
                      base=s, exponent=n, divide_by=factorial(n))
    return _finish(trace, out)


def kahler_volume_bound_cp3(scal_min) -> SymbolicBound:
    """``Vol(CP^3) <= (4 pi Acw_line)^3 / 6``."""
    return kahler_volume_bound_cp_line(3, scal_min)


def kahler_volume_bound_cpn(n: int, scal_min, c_n=None) -> SymbolicBound:
    """``Vol(CP^n) <= (2 pi c_n / scal)^n / n!`` with ``c_n`` symbolic unless given."""
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    trace = DerivationTrace()
    scal = _positive(scal_min, "scal_min")
    if c_n is None:
        factors, sym = [2, 1 / scal], ((f"c_{n}", 1),)
    else:
        factors, sym = [2, _positive(c_n, f"c_{n}"), 1 / scal], ()
    k = trace.apply("K-cowaist bound", f"K-cw <= c_{n}/min scal; stsys <= 2 pi c_{n}/scal",
                    "scale", factors=factors, pi_power=1, symbolic=sym)
    out = trace.apply("Kahler volume", f"Vol <= (2 pi c_{n}/scal)^{n} / {n}!", "power",
                      base=k, exponent=n, divide_by=factorial(n))
    return _finish(trace, out)


def generic_2essential_bound(b2: int, half_dim: int, scal_min, gamma=None,
                             banaszczyk_c: float | None = None) -> SymbolicBound:
    """``stsys_2 <= 2 pi Gamma_b c_n / scal`` for spin 2-essential manifolds of dimension 2n."""
    if b2 < 1:
        raise ValidationError(f"b2 must be >= 1, got {b2}")
    if half_dim < 1:
        raise ValidationError(f"half dimension must be >= 1, got {half_dim}")
    trace = DerivationTrace()
    scal = _positive(scal_min, "scal_min")
    gam, sym = _gamma_input(trace, b2, gamma, banaszczyk_c)
    out = trace.apply("2-essential cowaist", f"stsys_2 <= 2 pi Gamma_{b2} c_{half_dim} / min scal",
                      "scale", factors=[2, *gam, 1 / scal], pi_power=1,
                      symbolic=_merge_symbolic(sym, ((f"c_{half_dim}", 1),)))
    return _finish(trace, out)


def gamma_config(n: int, banaszczyk_c: float = DEFAULT_BANASZCZYK_C) -> float:
    """Gamma_n used in tables: exact for n <= 2, ``C n log n`` otherwise."""
    if n in EXACT_GAMMA:
        return float(EXACT_GAMMA[n])
    return banaszczyk_c * n * math.log(n)


def envelope_constant(banaszczyk_c: float = DEFAULT_BANASZCZYK_C) -> float:
    """``K`` with ``2 pi V_n Gamma_n 2(2n-1) <= K n^4 log n`` for all n >= 2.

    Uses ``V_n <= (n+1)^2/4 <= 9 n^2/16`` and ``2(2n-1) <= 4n``; the n = 2 row
    (exact Gamma_2) is covered once ``K >= 36 pi / (16 log 2)``.
    """
    return max(2 * math.pi * (9 / 16) * 4 * banaszczyk_c, 36 * math.pi / (16 * math.log(2)))


@dataclass(frozen=True)
class AsymptoticRow:
    n: int
    v_n: int
    gamma: float
    bound: float
    envelope: float
    exact: SymbolicBound | None = None

    @property
    def ok(self) -> bool:
        return self.bound <= self.envelope * (1 + 1e-12)


def asymptotic_check_s2_power(n_max: int, banaszczyk_c: float = DEFAULT_BANASZCZYK_C
                              ) -> list[AsymptoticRow]:
    """Bound at ``scal = 2n`` for n = 2..n_max against ``K n^4 log n``.

    At ``scal = 2n`` the cowaist bound is ``2(2n-1)``.
    """
    if n_max < 2:
        raise ValidationError("n_max must be >= 2")
    k = envelope_constant(banaszczyk_c)
    rows = []
    for n in range(2, n_max + 1):
        vn = v_n(n)
        g = gamma_config(n, banaszczyk_c)
        bound = 2 * math.pi * vn * g * float(acw_upper_bound(n, 2 * n))
        exact = stsys_bound_s2_power(n, 2 * n) if n in EXACT_GAMMA else None
        rows.append(AsymptoticRow(n, vn, g, bound, k * n**4 * math.log(n), exact))
    return rows


# --- manifold dispatch ------------------------------------------------------

@dataclass(frozen=True)
class ManifoldSpec:
    """Manifold family plus parameters; ``dimension`` is the real dimension."""

    kind: str
    params: tuple[int, ...] = ()
    scal_min: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "scal_min", _positive(self.scal_min, "scal_min"))
        arity = {"s2xs2": 0, "s2pow": 1, "s2tor": 2, "cp3": 0, "cpodd": 1, "generic": 2}
        if self.kind not in arity:
            raise ValidationError(f"unknown manifold kind {self.kind!r}")
        if len(self.params) != arity[self.kind]:
            raise ValidationError(f"{self.kind} takes {arity[self.kind]} integer parameters")
        if self.kind == "s2pow" and self.params[0] < 1:
            raise ValidationError("need at least one sphere factor")
        if self.kind == "s2tor" and (self.params[0] < 1 or self.params[1] < 0):
            raise ValidationError("s2tor needs M >= 1 spheres and N >= 0 circles")
        if self.kind == "cpodd" and self.params[0] < 0:
            raise ValidationError("cpodd N means CP^(2N+1) with N >= 0")
        if self.kind == "generic":
            b2, dim = self.params
            if b2 < 1 or dim < 2 or dim % 2:
                raise ValidationError("generic needs b2 >= 1 and an even dimension >= 2")

    @property
    def dimension(self) -> int:
        k, p = self.kind, self.params
        return {"s2xs2": lambda: 4, "s2pow": lambda: 2 * p[0], "s2tor": lambda: 2 * p[0] + p[1],
                "cp3": lambda: 6, "cpodd": lambda: 2 * (2 * p[0] + 1),
                "generic": lambda: p[1]}[k]()

    def describe(self) -> str:
        k, p = self.kind, self.params
        return {"s2xs2": lambda: "S^2 x S^2", "s2pow": lambda: f"(S^2)^{p[0]}",
                "s2tor": lambda: f"(S^2)^{p[0]} x T^{p[1]}", "cp3": lambda: "CP^3",
                "cpodd": lambda: f"CP^{2 * p[0] + 1}",
                "generic": lambda: f"spin 2-essential, b2={p[0]}, dim={p[1]}"}[k]()


def bounds_for(spec: ManifoldSpec, gamma=None,
               banaszczyk_c: float | None = None) -> dict[str, SymbolicBound]:
    """All bounds the chain yields for ``spec``, keyed by quantity."""
    scal = spec.scal_min
    k, p = spec.kind, spec.params
    if k in ("s2xs2", "s2pow"):
        n = 2 if k == "s2xs2" else p[0]
        return {"stsys2": stsys_bound_s2_power(n, scal, gamma, banaszczyk_c)}
    if k == "cp3":
        return {"stsys2": stsys_bound_cp3(scal), "kahler_volume": kahler_volume_bound_cp3(scal)}
    if k == "cpodd":
        n = 2 * p[0] + 1
        return {"stsys2": stsys_bound_cp_line(n, scal),
                "stsys2_k_cowaist": generic_2essential_bound(1, n, scal),
                "kahler_volume": kahler_volume_bound_cp_line(n, scal),
                "kahler_volume_k_cowaist": kahler_volume_bound_cpn(n, scal)}
    if k == "s2tor":
        m, t = p
        t_even = t + (t % 2)  # an odd torus is first multiplied by a long circle
        b2 = m + comb(t_even, 2)
        return {"stsys2_spherical": generic_2essential_bound(b2, m + t_even // 2, scal, gamma,
                                                             banaszczyk_c)}
    b2, dim = p
    return {"stsys2": generic_2essential_bound(b2, dim // 2, scal, gamma, banaszczyk_c)}
