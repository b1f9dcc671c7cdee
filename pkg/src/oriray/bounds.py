"""Numeric bounds: Chernoff tails, random-graph feasibility in log space,
parameter recipes, the constant K, and Erdős/Burr/tower bound calculators.

Every quantity that can overflow a double is carried as a natural logarithm.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

import mpmath
import numpy as np

NOT_APPLICABLE = "NOT_APPLICABLE"
EXACT_INT_DIGITS = 400
LN2 = math.log(2.0)
LN3 = math.log(3.0)


class ParameterError(ValueError):
    """Parameters outside the region where a recipe is valid."""


# ---------------------------------------------------------------------------
# elementary inequalities
# ---------------------------------------------------------------------------

def chernoff(EX: float, C: float, c: float) -> tuple[float, float, float]:
    """Upper tail at ``C*EX``, upper tail at ``(1+c)EX`` and lower tail at ``(1-c)EX``."""
    if not EX > 0 or not C > 1 or not 0 < c < 1:
        raise ParameterError(f"need EX > 0, C > 1, 0 < c < 1; got {EX}, {C}, {c}")
    upper_C = math.exp(EX * (C - 1 - C * math.log(C)))
    return upper_C, math.exp(-c * c * EX / 3), math.exp(-c * c * EX / 2)


def geom_lemma_check(a: float, c: float, n: int):
    """``(a^n - 1)/(a - 1) < (1+c) a^(n-1)``, or NOT_APPLICABLE unless ``a > 1 + 1/c``."""
    if c <= 0 or n < 1:
        raise ParameterError("need c > 0 and n >= 1")
    if not a > 1 + 1 / c:
        return NOT_APPLICABLE
    la = math.log(a)
    lhs = n * la + math.log1p(-math.exp(-n * la)) - math.log(a - 1)
    rhs = math.log1p(c) + (n - 1) * la
    return lhs < rhs


def log_one_minus_C_plus_ClnC(log_C: float) -> float:
    """``log(1 - C + C ln C)`` from ``L = ln C``; stable for huge C."""
    L = log_C
    if L <= 0:
        raise ParameterError("need C > 1")
    return L + math.log(math.expm1(-L) + L)


# ---------------------------------------------------------------------------
# random graph feasibility
# ---------------------------------------------------------------------------

@dataclass
class RandomModelParameters:
    n: int
    log_N: float
    log_p: float
    c: float
    log_C: float
    mode: str = "isometric"
    N_int: int | None = None
    delta: float | None = None

    def __post_init__(self):
        if self.n < 3:
            raise ParameterError("tree size must be at least 3")
        if not 0 < self.c < 1:
            raise ParameterError(f"c must lie in (0,1), got {self.c}")
        if not self.log_p < 0:
            raise ParameterError("p must lie in (0,1)")
        if not self.log_C > 0:
            raise ParameterError("C must exceed 1")
        if self.mode not in ("isometric", "plain"):
            raise ParameterError(f"unknown mode {self.mode!r}")

    @property
    def log_pN(self) -> float:
        return self.log_p + self.log_N

    @property
    def log_hbar(self) -> float:
        n, c = self.n, self.c
        if self.mode == "isometric":
            return n * math.log1p(c) + (n - 2) * self.log_pN
        return math.log1p(c) + math.log(n - 2) + self.log_pN

    def to_json(self) -> dict:
        d = asdict(self)
        d["N_int"] = None if self.N_int is None else str(self.N_int)
        return d


@dataclass
class FeasibilityReport:
    conditions: dict[str, bool]
    margins: dict[str, float]  # log(lhs) - log(rhs), oriented so positive means satisfied

    @property
    def all_true(self) -> bool:
        return all(self.conditions.values())


def _log_rhs_2(p: RandomModelParameters) -> float:
    return math.log((p.n - 1) * p.log_N + math.log1p(p.c) + LN3)


def random_feasibility(p: RandomModelParameters) -> FeasibilityReport:
    """Conditions (1)-(4) (isometric) or their plain counterparts, all compared as logs."""
    n, c = p.n, p.c
    lc = math.log(c)
    l1mc = math.log1p(-c)
    margins = {}
    # (1) c^2 pN > 3 ln(3N)
    margins["1"] = 2 * lc + p.log_pN - (LN3 + math.log(LN3 + p.log_N))
    g = log_one_minus_C_plus_ClnC(p.log_C)
    rhs3 = np.logaddexp(p.log_N + math.log(LN2), math.log(math.log(3 * n)))
    if p.mode == "isometric":
        margins["2"] = g + p.log_p + p.log_hbar - _log_rhs_2(p)
        margins["3"] = 2 * lc + 2 * p.log_C + 2 * p.log_hbar - rhs3
        a = math.log((n - 1) * (n - 2)) - l1mc - p.log_p
        b = LN2 + p.log_C - l1mc + math.log(n - 1) + p.log_hbar
    else:
        margins["2"] = g + math.log1p(c) + math.log(n - 2) + 2 * p.log_p + p.log_N - _log_rhs_2(p)
        margins["3"] = 2 * (lc + p.log_C + math.log1p(c) + math.log(n - 2) + p.log_pN) - rhs3
        a = math.log(n * (n - 1)) - l1mc - p.log_p
        b = LN2 + p.log_C + math.log1p(c) - l1mc + math.log((n - 1) * (n - 2)) + p.log_pN
    margins["4"] = p.log_N - float(np.logaddexp(a, b))
    margins = {k: float(v) for k, v in margins.items()}
    return FeasibilityReport({k: v > 0 for k, v in margins.items()}, margins)


def direct_feasibility(n: int, N: float, p: float, c: float, C: float, mode: str = "isometric") -> dict[str, bool]:
    """Straight float evaluation of the same conditions, for moderate magnitudes only."""
    if mode == "isometric":
        hbar = (1 + c) ** n * (p * N) ** (n - 2)
        lhs2 = (1 - C + C * math.log(C)) * p * hbar
        lhs3 = c ** 2 * C ** 2 * (1 + c) ** (2 * n) * (p * N) ** (2 * n - 4)
        lhs4 = (n - 1) * (n - 2) / ((1 - c) * p) + 2 * C / (1 - c) * (n - 1) * hbar
    else:
        lhs2 = (1 - C + C * math.log(C)) * (1 + c) * (n - 2) * p * p * N
        lhs3 = (c * C * (1 + c) * (n - 2) * p * N) ** 2
        lhs4 = n * (n - 1) / ((1 - c) * p) + 2 * C * (1 + c) / (1 - c) * (n - 1) * (n - 2) * p * N
    return {
        "1": c * c * p * N > 3 * math.log(3 * N),
        "2": lhs2 > (n - 1) * math.log(N) + math.log(1 + c) + math.log(3),
        "3": lhs3 > N * math.log(2) + math.log(3 * n),
        "4": lhs4 < N,
    }


def _smallest_integer_above(log_x: float, x_mp=None) -> tuple[float, int | None]:
    """``log`` of the smallest integer exceeding ``x`` and that integer when it is printable."""
    if log_x / math.log(10) > EXACT_INT_DIGITS:
        # beyond this the +1 is far below double resolution
        return log_x, None
    digits = int(log_x / math.log(10)) + 30
    with mpmath.workdps(digits):
        x = x_mp() if x_mp is not None else mpmath.exp(mpmath.mpf(log_x))
        N = int(mpmath.floor(x)) + 1
        return float(mpmath.log(N)), N


def pikh_constraints(delta: float, c: float, eps: float | None = None) -> list[str]:
    bad = []
    if not (0 < delta < 1 and 0 < c < 1):
        bad.append("delta and c must lie in (0,1)")
    if eps is not None and not (1 + delta) * (1 + c) < 1 + eps:
        bad.append(f"(1+delta)(1+c) = {(1 + delta) * (1 + c):.6g} is not below 1+eps = {1 + eps:.6g}")
    lhs = 4 * (1 + delta) * (1 - c) / (2 + c)
    if not lhs > 2 + delta:
        bad.append(f"4(1+delta)(1-c)/(2+c) = {lhs:.6g} does not exceed 2+delta = {2 + delta:.6g}")
    return bad


def pikh_parameters(n: int, delta: float, c: float, eps: float | None = None,
                    validate: bool = True) -> RandomModelParameters:
    """Isometric recipe: ``C = e^n``, ``pN = 4(1+delta) n^2 ln n`` and N the smallest
    integer above ``(2+c)/(1-c) C (n-1) (1+c)^n (pN)^(n-2)``.

    ``validate=False`` skips the (delta, c) constraints for diagnostics.
    """
    if n < 3:
        raise ParameterError("recipe needs n >= 3")
    if validate:
        bad = pikh_constraints(delta, c, eps)
        if bad:
            raise ParameterError("; ".join(bad))
    pN = 4 * (1 + delta) * n * n * math.log(n)
    log_x = (math.log((2 + c) / (1 - c)) + n + math.log(n - 1) + n * math.log1p(c)
             + (n - 2) * math.log(pN))

    def x_mp():
        m = mpmath.mpf
        pn = 4 * (1 + m(delta)) * n * n * mpmath.log(n)
        return (2 + m(c)) * mpmath.exp(n) / (1 - m(c)) * (n - 1) * (1 + m(c)) ** n * pn ** (n - 2)

    log_N, N_int = _smallest_integer_above(log_x, x_mp)
    return RandomModelParameters(n, log_N, math.log(pN) - log_N, c, float(n), "isometric", N_int, delta)


def klr_constraint(delta: float, c: float) -> float:
    return 4 * (1 + delta) * (1 - c) ** 2 / (1 + c) ** 3 - (4 + delta)


def _bisect(f, lo: float, hi: float, iters: int = 200) -> float:
    flo = f(lo)
    for _ in range(iters):
        mid = (lo + hi) / 2
        if (f(mid) > 0) == (flo > 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass
class KlrRecipe:
    params: RandomModelParameters
    K: float
    x_star: float
    delta: float
    c: float


def klr_parameters(n: int, epsilon: float) -> KlrRecipe:
    """Plain recipe: ``delta = eps/(2K)``, c half the root of the c-constraint,
    ``p = (1-c)/(2C(1+c)^2 n^2)`` and N just above ``K(1+delta) n^4 ln n``."""
    if not epsilon > 0:
        raise ParameterError("epsilon must be positive")
    if n < 3:
        raise ParameterError("recipe needs n >= 3")
    x_star, K = minimize_K()
    delta = epsilon / (2 * K)
    if not 0 < delta < 1:
        raise ParameterError(f"delta = {delta} outside (0,1)")
    root = _bisect(lambda c: klr_constraint(delta, c), 0.0, 1.0)
    c = root / 2
    if not (c > 0 and K * delta < epsilon and klr_constraint(delta, c) > 0):
        raise ParameterError("no representable (delta, c) for this epsilon")
    log_x = math.log(K) + math.log1p(delta) + 4 * math.log(n) + math.log(math.log(n))

    def x_mp():
        return mpmath.mpf(K) * (1 + mpmath.mpf(delta)) * mpmath.mpf(n) ** 4 * mpmath.log(n)

    log_N, N_int = _smallest_integer_above(log_x, x_mp)
    log_p = math.log1p(-c) - LN2 - math.log(x_star) - 2 * math.log1p(c) - 2 * math.log(n)
    params = RandomModelParameters(n, log_N, log_p, c, math.log(x_star), "plain", N_int, delta)
    return KlrRecipe(params, K, x_star, delta, c)


# ---------------------------------------------------------------------------
# the constant K
# ---------------------------------------------------------------------------

def k_objective(x: float) -> float:
    return 16 * x * x / (1 - x + x * math.log(x))


GOLDEN = (math.sqrt(5) - 1) / 2


def minimize_K(x0: float = 3.0, tol: float = 1e-10) -> tuple[float, float]:
    """Minimise ``16x^2/(1 - x + x ln x)`` over ``x > 1``.

    Works in ``t = ln(x - 1)`` so the domain is the whole line, brackets the
    minimum by expanding steps from ``x0``, then golden-section search.
    """
    if not x0 > 1:
        raise ParameterError("start point must exceed 1")

    def f(t: float) -> float:
        return k_objective(1 + math.exp(t))

    a, b = math.log(x0 - 1), math.log(x0 - 1) + 0.5
    fa, fb = f(a), f(b)
    if fb > fa:
        a, b, fa, fb = b, a, fb, fa
    step = b - a
    c_ = b + step
    fc = f(c_)
    while fc < fb:
        step *= 2
        a, b, fa, fb = b, c_, fb, fc
        c_ = b + step
        fc = f(c_)
    lo, hi = min(a, c_), max(a, c_)
    x1 = hi - GOLDEN * (hi - lo)
    x2 = lo + GOLDEN * (hi - lo)
    f1, f2 = f(x1), f(x2)
    while (math.exp(hi) - math.exp(lo)) > tol:
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - GOLDEN * (hi - lo)
            f1 = f(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + GOLDEN * (hi - lo)
            f2 = f(x2)
    t = (lo + hi) / 2
    return 1 + math.exp(t), f(t)


# ---------------------------------------------------------------------------
# bound reports
# ---------------------------------------------------------------------------

@dataclass
class BoundReport:
    name: str
    inputs: dict[str, Any]
    value: int | float | None
    log_value: float
    formula: str
    certified: bool = True
    notes: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        v = self.value
        if isinstance(v, int) and abs(v) >= 2 ** 53:
            v = str(v)
        return {"name": self.name, "inputs": self.inputs, "value": v, "log_value": self.log_value,
                "formula": self.formula, "certified": self.certified, "notes": self.notes}


def _int_report(name, inputs, value: int, formula, **kw) -> BoundReport:
    log_value = float(mpmath.log(value)) if value > 0 else -math.inf
    if len(str(value)) > EXACT_INT_DIGITS:
        value = None
    return BoundReport(name, inputs, value, log_value, formula, **kw)


def _ceil_power(log_base_fn, g: int, lg: float) -> tuple[int | None, float]:
    digits = int(lg / math.log(10)) + 30
    if digits > EXACT_INT_DIGITS:
        return None, lg
    with mpmath.workdps(digits):
        v = int(mpmath.ceil(log_base_fn() ** g))
    return v, float(mpmath.log(v))


def erdos_lower(k: int, g: int) -> BoundReport:
    if k < 1 or g < 1:
        raise ParameterError("need k, g >= 1")
    lg = (g - 1) / 2 * math.log(k)
    if (g - 1) % 2 == 0:
        value: int | float | None = k ** ((g - 1) // 2)
        if len(str(value)) > EXACT_INT_DIGITS:
            value = None
    else:
        sq = k ** (g - 1)
        r = math.isqrt(sq)
        value = r if r * r == sq else (math.sqrt(sq) if lg < 700 else None)
    return BoundReport("erdos_lower", {"k": k, "g": g}, value, lg, "E(k,g) >= k^((g-1)/2)")


def erdos_upper(k: int, g: int) -> BoundReport:
    if k < 4 or g < 4:
        raise ParameterError("upper bound needs k, g >= 4")

    def h():
        return 6 * (k + 1) * mpmath.log(k + 1)

    h_f = 6 * (k + 1) * math.log(k + 1)
    value, lg = _ceil_power(h, g, g * math.log(h_f))
    return BoundReport("erdos_upper", {"k": k, "g": g}, value, lg,
                       "E(k,g) <= ceil(h^g), h = 6(k+1)ln(k+1)", notes={"h": h_f})


def spencer_bound(k: int, g: int, constant: float) -> BoundReport:
    """Largest m with ``m^(1/(g-2)) ln m < constant*k``; the constant is caller-supplied."""
    if k < 3 or g < 3 or not constant > 0:
        raise ParameterError("need k, g >= 3 and a positive constant")
    target = math.log(constant * k)

    # log of m^(1/(g-2)) ln m as a function of L = ln m, increasing for L > 0
    def phi(L: float) -> float:
        return L / (g - 2) + math.log(L) - target

    lo, hi = 1e-12, 1.0
    while phi(hi) < 0:
        hi *= 2
    L = _bisect(phi, lo, hi)
    return BoundReport("erdos_spencer", {"k": k, "g": g, "constant": constant},
                       math.exp(L) if L < 700 else None, L,
                       "m^(1/(g-2)) ln m < C k for m = E(k,g)", certified=False)


def erdos_bounds(k: int, g: int, spencer_constant: float | None = None) -> list[BoundReport]:
    if k < 2:
        raise ParameterError("need k >= 2")
    out = [erdos_lower(k, g)]
    if k >= 4 and g >= 4:
        out.append(erdos_upper(k, g))
    if spencer_constant is not None:
        out.append(spencer_bound(k, g, spencer_constant))
    return out


def tower_bound(n: int) -> BoundReport:
    lg = 2 ** (n - 1) * LN2 if n - 1 < 1000 else math.inf
    value = 2 ** 2 ** (n - 1) if n <= 10 else None
    return BoundReport("tower", {"n": n}, value, lg, "IR(T_n) <= 2^(2^(n-1))")


def ir_upper_bounds(n: int) -> list[BoundReport]:
    if n < 2:
        raise ParameterError("need n >= 2")
    burr_t = (n * n - n) // 2 + 1
    out = [
        _int_report("burr_paths", {"n": n}, n, "B(I_n) = n"),
        _int_report("burr_trees_upper", {"n": n}, burr_t, "B(T_n) <= n^2/2 - n/2 + 1"),
    ]
    g = 2 * n - 2
    for name, k in (("ir_paths_upper", n), ("ir_trees_upper", burr_t)):
        if k >= 4 and g >= 4:
            e = erdos_upper(k, g)
            out.append(BoundReport(name, {"n": n, "k": k, "g": g}, e.value, e.log_value,
                                   "IR <= E(k, 2n-2) <= ceil(h^(2n-2))"))
        else:
            out.append(BoundReport(name, {"n": n, "k": k, "g": g}, None, math.inf,
                                   "IR <= E(k, 2n-2); numeric Erdos bound needs k, g >= 4",
                                   certified=False))
    out.append(BoundReport("ramsey_paths_lower", {"n": n}, math.ceil(n * n / 2),
                           math.log(n * n / 2), "R(I_n) >= n^2/2", notes={"real": n * n / 2}))
    out.append(tower_bound(n))
    return out


def tower_sizes_check(kmax: int) -> list[tuple[int, int, bool]]:
    """``(k, a_k, a_k + 1 <= 2^(2^(k-1)))`` with ``a_1 = 1`` and ``a_{k+1} = a_k(a_k + 1)``."""
    out = []
    a = 1
    for k in range(1, kmax + 1):
        out.append((k, a, a + 1 <= 2 ** 2 ** (k - 1)))
        a = a * (a + 1)
    return out


# ---------------------------------------------------------------------------
# thresholds
# ---------------------------------------------------------------------------

@dataclass
class ThresholdReport:
    delta: float
    c: float
    n_max: int
    threshold: int | None
    failures: dict[str, int]
    last_failure: int | None


def pikh_threshold(delta: float, c: float, n_max: int = 10_000, n_min: int = 3,
                   validate: bool = True) -> ThresholdReport:
    """Smallest n0 such that every n in [n0, n_max] passes all four conditions."""
    failures = {k: 0 for k in "1234"}
    last_fail = None
    for n in range(n_min, n_max + 1):
        rep = random_feasibility(pikh_parameters(n, delta, c, validate=validate))
        if not rep.all_true:
            last_fail = n
            for k, ok in rep.conditions.items():
                failures[k] += not ok
    if last_fail is None:
        threshold = n_min
    elif last_fail == n_max:
        threshold = None
    else:
        threshold = last_fail + 1
    return ThresholdReport(delta, c, n_max, threshold, failures, last_fail)


def default_pikh_grid(eps: float, step: float = 0.005) -> tuple[float, float]:
    """Grid point with the largest c, then the largest delta, meeting both recipe constraints."""
    best = None
    ticks = [round(i * step, 10) for i in range(1, int(1 / step))]
    for c in ticks:
        for delta in ticks:
            if not pikh_constraints(delta, c, eps):
                if best is None or (c, delta) > best[::-1]:
                    best = (delta, c)
    if best is None:
        raise ParameterError(f"no grid point satisfies the constraints for eps = {eps}")
    return best
