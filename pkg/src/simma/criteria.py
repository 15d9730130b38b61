"""Deciding whether a mixed moving average is a semimartingale.

The general route evaluates the sufficient drift, Gaussian and jump
integrals and, when the driver has infinite variation or a
Gaussian part on every mark, the necessary conditions.  Special families
(fractional, stable, tempered stable, supOU, multi-stable, superposed
fractional, finite variation) have closed-form criteria of their own.

Finiteness is always certified by exponent arithmetic on the declared
power laws of the kernel derivative, the Levy measure and the mark measure.
Quadrature only fills in the value of an integral already known to be
finite.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import kernels as kn
from . import levy_measure as lm
from . import quadrature
from .errors import DomainError, NonDeterministic, NotAbsolutelyContinuous, WellDefinednessViolation
from .levy_measure import ExponentsUnknown, Status

SEMIMARTINGALE = "Semimartingale"
NOT_SEMIMARTINGALE = "NotSemimartingale"
INCONCLUSIVE = "Inconclusive"

SUFFICIENT = "SufficientConditions"
NECESSITY = "NecessityViolation"
UNDECIDABLE = "Undecidable"

EXIT_CODES = {SEMIMARTINGALE: 0, NOT_SEMIMARTINGALE: 1, INCONCLUSIVE: 2}

TOL = lm.EXPONENT_TOL
# geometric ratio thresholds for series over countably many marks
RATIO_DIVERGE = 1.05
RATIO_CONVERGE = 0.95


def closed_form_basis(name):
    return f"ClosedForm({name})"


@dataclass(frozen=True)
class IntegralValue:
    """An integral with its certified finiteness (None when undecided)."""

    value: float
    finite: Optional[bool]
    method: str
    note: str = ""

    @property
    def status(self):
        return {True: "holds", False: "fails", None: "unknown"}[self.finite]


def _unknown(note):
    return IntegralValue(math.nan, None, "exponent", note)


def _infinite(note):
    return IntegralValue(math.inf, False, "exponent", note)


def _zero(note):
    return IntegralValue(0.0, True, "closed_form", note)


@dataclass
class CriteriaReport:
    verdict: str
    basis: str
    integrals: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)
    reason: str = ""
    constant: float = math.nan

    @property
    def exit_code(self):
        return EXIT_CODES[self.verdict]

    def to_record(self):
        """Flat key-value record with stable field names."""
        rec = {"verdict": self.verdict, "basis": self.basis, "reason": self.reason}
        for name in sorted(self.integrals):
            iv = self.integrals[name]
            rec[name] = iv.value
            rec[f"{name}_status"] = iv.status
        for name in sorted(self.assumptions):
            val = self.assumptions[name]
            rec[f"assume_{name}"] = "unknown" if val is None else str(bool(val)).lower()
        if not math.isnan(self.constant):
            rec["constant"] = self.constant
        return rec


# ---------------------------------------------------------------------------
# exponent-certified time integrals int_0^inf F(|fdot(t, v)|) dt
# ---------------------------------------------------------------------------


def _time_finiteness(ke, p_small, p_large):
    """F(u) ~ u**p_small as u -> 0 and u**p_large as u -> inf; returns (finite, why)."""
    if ke.vanishing:
        return True, "fdot vanishes"
    a, b = ke.origin, ke.infinity
    if a < 0:
        e = a * p_large
        if e <= -1.0 + TOL:
            return False, f"integrand ~ t^{e:.6g} at t = 0"
    if b == -math.inf:
        return True, ""
    if b >= 0 or p_small <= 0:
        return False, "fdot does not vanish at t = inf"
    e = b * p_small
    if e >= -1.0 - TOL:
        return False, f"integrand ~ t^{e:.6g} at t = inf"
    return True, ""


def _kink_breaks(kernel, v, ke):
    """Times where |fdot| crosses 1 for power-law derivatives."""
    if ke.vanishing:
        return ()
    if isinstance(kernel, kn.Fractional):
        g = kernel.gamma_at(v)
        if g != 1.0:
            return (g ** (1.0 / (1.0 - g)),)
    if isinstance(kernel, kn.ExponentialOU):
        return (1.0 / abs(v),)
    return (1.0,)


def time_integral(kernel, v, F, exps):
    """int_0^inf F(|fdot(t, v)|) dt with F's power exponents ``exps``.

    ``exps`` is (p_small, p_large) or None when F itself is infinite.
    """
    if not kernel.absolutely_continuous:
        return _infinite("kernel not absolutely continuous")
    ke = kernel.exponents(v)
    if ke is None:
        return _unknown("kernel exponents not declared")
    if ke.vanishing:
        return _zero("fdot vanishes")
    if exps is None:
        return _infinite("inner jump integral is infinite")
    ok, why = _time_finiteness(ke, *exps)
    if not ok:
        return _infinite(why)

    def h(t):
        return F(abs(float(kernel.fdot(t, v))))

    val = quadrature.integrate_positive(h, 0.0, math.inf, _kink_breaks(kernel, v, ke))
    return IntegralValue(val, True, "exponent+quadrature")


# ---------------------------------------------------------------------------
# aggregation over marks
# ---------------------------------------------------------------------------


def _kernel_mark_free(kernel):
    if isinstance(kernel, (kn.Step, kn.Box)):
        return True
    if isinstance(kernel, kn.Fractional):
        return not callable(kernel.gamma)
    return False


def _spec_mark_free(spec):
    return not any(callable(x) for x in (spec.levy, spec.drift, spec.gaussian_var))


def _series_total(terms, note):
    """Sum of a non-negative series from its first terms, by a ratio test."""
    terms = [float(t) for t in terms]
    if any(not math.isfinite(t) for t in terms):
        return _infinite(note or "infinite term")
    partial = math.fsum(terms)
    tail = [t for t in terms[-6:]]
    if all(t == 0.0 for t in tail):
        return IntegralValue(partial, True, "ratio_test", "terms vanish")
    if any(t == 0.0 for t in tail):
        return IntegralValue(math.nan, None, "ratio_test", "irregular terms")
    ratios = [b / a for a, b in zip(tail, tail[1:])]
    r = math.exp(math.fsum(math.log(x) for x in ratios) / len(ratios))
    if r > RATIO_DIVERGE:
        return IntegralValue(math.inf, False, "ratio_test", f"terms grow geometrically (ratio {r:.4g})")
    if r < RATIO_CONVERGE:
        return IntegralValue(partial + terms[-1] * r / (1.0 - r), True, "ratio_test", f"ratio {r:.4g}")
    return IntegralValue(math.nan, None, "ratio_test", f"ratio {r:.4g} too close to 1")


def mark_integral(spec, kernel, per_mark: Callable[[float], IntegralValue]):
    """int_V per_mark(v) m(dv) with exact handling of atomic mark measures."""
    marks = spec.marks
    if isinstance(marks, lm.DiscreteMarks):
        parts = [(w, per_mark(v)) for v, w in marks.atoms()]
    elif isinstance(marks, lm.SequenceMarks):
        parts = [(w, per_mark(v)) for v, w in marks.atoms()]
        if any(p.finite is False for _, p in parts):
            bad = next(p for _, p in parts if p.finite is False)
            return _infinite(bad.note)
        if any(p.finite is None for _, p in parts):
            return _unknown(next(p for _, p in parts if p.finite is None).note)
        return _series_total([w * p.value for w, p in parts], "")
    else:
        if not (_kernel_mark_free(kernel) and _spec_mark_free(spec)):
            return _unknown("mark-dependent integrand over a continuum of marks")
        inner = per_mark(marks.sample_points(1)[0])
        if inner.finite is not True:
            return inner
        if inner.value == 0.0:
            return inner
        mass = marks.mass()
        return IntegralValue(inner.value * mass, True, inner.method, inner.note)
    for _, p in parts:
        if p.finite is False:
            return _infinite(p.note)
    for _, p in parts:
        if p.finite is None:
            return _unknown(p.note)
    methods = {p.method for _, p in parts}
    method = methods.pop() if len(methods) == 1 else "exponent+quadrature"
    return IntegralValue(math.fsum(w * p.value for w, p in parts), True, method)


def _every_mark(spec, kernel, per_mark):
    """Per-mark finiteness for m-a.e. quantifiers (value is the worst mark)."""
    marks = spec.probe_marks()
    if isinstance(spec.marks, lm.DensityMarks) and _kernel_mark_free(kernel) and _spec_mark_free(spec):
        marks = marks[:1]
    results = [per_mark(v) for v in marks]
    for r in results:
        if r.finite is False:
            return r
    for r in results:
        if r.finite is None:
            return r
    if isinstance(spec.marks, lm.DensityMarks) and len(marks) > 1:
        return IntegralValue(max(r.value for r in results), None, "probe", "checked at probe marks only")
    return IntegralValue(max(r.value for r in results), True, results[0].method)


# ---------------------------------------------------------------------------
# individual conditions
# ---------------------------------------------------------------------------


def check_drift(spec, kernel):
    """int_V |B(f(0, v), v)| m(dv) < inf."""
    if spec.symmetric:
        return _zero("symmetric random measure: B = 0")

    def per_mark(v):
        x0 = kn.f_at_zero(kernel, v)
        return IntegralValue(abs(lm.char_B(x0, v, spec)), True, "closed_form")

    return mark_integral(spec, kernel, per_mark)


def check_gaussian(spec, kernel):
    """int_V int_0^inf fdot^2 sigma^2 ds m(dv) < inf."""
    if spec.gaussian_free:
        return _zero("no Gaussian part")

    def per_mark(v):
        s2 = spec.sigma2(v)
        if s2 == 0.0:
            return _zero("no Gaussian part")
        iv = time_integral(kernel, v, lambda u: u * u, (2.0, 2.0))
        if iv.finite:
            return IntegralValue(s2 * iv.value, True, iv.method)
        return iv

    return mark_integral(spec, kernel, per_mark)


def _psi_time(spec, kernel, v, truncated=False):
    rho = spec.rho(v)
    try:
        if truncated:
            exps = lm.psi_truncated_exponents(rho)
            F = lambda u: lm.psi_truncated(u, rho)
        else:
            exps = lm.psi_exponents(rho)
            F = lambda u: lm.psi_integral(u, rho)
    except ExponentsUnknown as exc:
        return _unknown(str(exc))
    return time_integral(kernel, v, F, exps)


def check_sufficient(spec, kernel):
    """int_V int_0^inf int (|x fdot| ^ |x fdot|^2) rho_v(dx) ds m(dv) < inf."""
    return mark_integral(spec, kernel, lambda v: _psi_time(spec, kernel, v))


def check_truncated(spec, kernel):
    """Per-mark truncated jump integral with weight (1 ^ x^-2)."""
    return _every_mark(spec, kernel, lambda v: _psi_time(spec, kernel, v, truncated=True))


def check_per_mark(spec, kernel):
    """Per-mark jump integral, necessary under the tail ratio condition."""
    return _every_mark(spec, kernel, lambda v: _psi_time(spec, kernel, v))


def infinite_variation_everywhere(spec):
    """For each probe mark: Gaussian part or int_{|x|<=1} |x| rho_v = inf.

    Returns True (all marks), False (no mark) or None (mixed or unknown).
    """
    flags = []
    for v in spec.probe_marks():
        if spec.sigma2(v) > 0:
            flags.append(True)
            continue
        try:
            flags.append(lm.infinite_variation(spec.rho(v)))
        except ExponentsUnknown:
            flags.append(None)
    if all(f is True for f in flags):
        return True
    if all(f is False for f in flags):
        return False
    return None


def ratio_tail_all(spec):
    """The limsup tail-ratio condition at every mark."""
    statuses = [lm.ratio_u0(r).status for r in spec.distinct_measures()]
    if all(s is Status.SATISFIED for s in statuses):
        return Status.SATISFIED
    if any(s is Status.VIOLATED for s in statuses):
        return Status.VIOLATED
    return Status.UNKNOWN


@dataclass(frozen=True)
class NecessityResult:
    status: str  # satisfied, violated, not_applicable, unknown
    which: str = ""
    value: float = math.nan
    integrals: dict = field(default_factory=dict)
    assumptions: dict = field(default_factory=dict)


def check_necessary(spec, kernel):
    """Necessary conditions, applicable when the driver has infinite variation on every mark."""
    invar = infinite_variation_everywhere(spec)
    assumptions = {"infinite_variation_driver": invar}
    if invar is not True:
        return NecessityResult("not_applicable", "infinite_variation_driver", assumptions=assumptions)
    integrals = {}
    if not kernel.absolutely_continuous:
        return NecessityResult("violated", "absolute_continuity", math.inf, integrals, assumptions)
    gauss = check_gaussian(spec, kernel)
    integrals["gaussian"] = gauss
    if gauss.finite is False:
        return NecessityResult("violated", "gaussian", math.inf, integrals, assumptions)
    trunc = check_truncated(spec, kernel)
    integrals["truncated_jump_integral"] = trunc
    if trunc.finite is False:
        return NecessityResult("violated", "truncated_jump_integral", math.inf, integrals, assumptions)
    u0 = ratio_tail_all(spec)
    assumptions["ratio_tail"] = u0 is Status.SATISFIED if u0 is not Status.UNKNOWN else None
    if u0 is Status.SATISFIED:
        per = check_per_mark(spec, kernel)
        integrals["per_mark_jump_integral"] = per
        if per.finite is False:
            return NecessityResult("violated", "per_mark_jump_integral", math.inf, integrals, assumptions)
    u00 = lm.ratio_u00(spec).status
    assumptions["ratio_uniform"] = u00 is Status.SATISFIED if u00 is not Status.UNKNOWN else None
    if u00 is Status.SATISFIED:
        cf = check_sufficient(spec, kernel)
        integrals["jump_integral"] = cf
        if cf.finite is False:
            return NecessityResult("violated", "jump_integral", math.inf, integrals, assumptions)
    unknown = [k for k, iv in integrals.items() if iv.finite is None]
    if unknown:
        return NecessityResult("unknown", ",".join(unknown), math.nan, integrals, assumptions)
    return NecessityResult("satisfied", "", math.nan, integrals, assumptions)


# ---------------------------------------------------------------------------
# finite-variation route
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FVResult:
    finite_variation: bool
    reason: str
    value: float = math.nan

    def __bool__(self):
        return self.finite_variation


def closed_form_fv(kernel, spec):
    """Certify finite variation of X from a finite-variation driver.

    Needs no Gaussian part, int (1 ^ |x|) rho_v(dx) < inf on every mark, and
    either a piecewise-constant kernel or int int int (1 ^ |x gdot|) rho ds m < inf.
    """
    if not spec.gaussian_free:
        return FVResult(False, "Gaussian part has infinite variation")
    if isinstance(spec.marks, lm.DensityMarks) and not _spec_mark_free(spec):
        return FVResult(False, "mark-dependent driver on a continuum of marks")
    for rho in spec.distinct_measures():
        try:
            if lm.infinite_variation(rho):
                return FVResult(False, "driver has infinite variation")
        except ExponentsUnknown as exc:
            return FVResult(False, str(exc))
    if isinstance(spec.marks, lm.SequenceMarks):
        return FVResult(False, "countably many marks")
    if kernel.piecewise_constant:
        return FVResult(True, "piecewise-constant kernel and finite-variation driver", 0.0)

    def per_mark(v):
        rho = spec.rho(v)
        try:
            exps = lm.phi_one_exponents(rho)
        except ExponentsUnknown as exc:
            return _unknown(str(exc))
        return time_integral(kernel, v, lambda u: lm.phi_one(u, rho), exps)

    iv = mark_integral(spec, kernel, per_mark)
    if iv.finite:
        return FVResult(True, "int (1 ^ |x gdot|) rho ds m is finite", iv.value)
    return FVResult(False, iv.note or "finite-variation integral not certified", iv.value)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------


def fractional_constant(gamma):
    """gamma^{1/(1-gamma)} (1/gamma + 1/(1 - 2 gamma)) for gamma in (0, 1/2)."""
    if not 0.0 < gamma < 0.5:
        return math.inf
    return gamma ** (1.0 / (1.0 - gamma)) * (1.0 / gamma + 1.0 / (1.0 - 2.0 * gamma))


def fractional_time_integral(gamma, x=1.0):
    """Quadrature of int_0^inf (|x gamma t^(gamma-1)| ^ |x gamma t^(gamma-1)|^2) dt."""
    ax = abs(x)
    if ax == 0.0:
        return 0.0
    kink = (ax * gamma) ** (1.0 / (1.0 - gamma))

    def h(t):
        u = ax * gamma * t ** (gamma - 1.0)
        return min(u, u * u)

    return quadrature.integrate_positive(h, 0.0, math.inf, (kink,))


def stable_psi_constant(alpha, c=1.0):
    """psi_integral(u) / |u|^alpha for the symmetric stable measure, alpha in (1, 2)."""
    if not 1.0 < alpha < 2.0:
        return math.inf
    return 2.0 * c * (1.0 / (2.0 - alpha) + 1.0 / (alpha - 1.0))


def closed_form_fractional(rho, sigma2=0.0, gamma=0.25):
    """Fractional Levy process: SM iff sigma2 = 0, gamma < 1/2 and int |x|^{1/(1-gamma)} rho < inf."""
    if gamma <= 0:
        raise DomainError(f"gamma={gamma} must be positive")
    name = closed_form_basis("fractional")
    const = fractional_constant(gamma)
    rep = CriteriaReport(INCONCLUSIVE, name, constant=const)
    if sigma2 > 0:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, "Gaussian part present"
        return rep
    if gamma >= 0.5:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, "gamma >= 1/2"
        return rep
    q = 1.0 / (1.0 - gamma)
    try:
        finite = lm.moment_finite(rho, q)
    except ExponentsUnknown as exc:
        rep.reason = str(exc)
        return rep
    value = lm.abs_moment(rho, q) if finite else math.inf
    rep.integrals["fractional_moment"] = IntegralValue(value, finite, "closed_form")
    if finite:
        rep.verdict, rep.reason = SEMIMARTINGALE, f"int |x|^{q:.6g} rho(dx) < inf"
    else:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, f"int |x|^{q:.6g} rho(dx) = inf"
    return rep


def _default_mark(kernel):
    return -1.0 if isinstance(kernel, kn.ExponentialOU) else 0.0


def _ac_or_report(kernel, name):
    if not kernel.absolutely_continuous:
        return CriteriaReport(NOT_SEMIMARTINGALE, name, reason="kernel not absolutely continuous")
    return None


def closed_form_stable(kernel, alpha, c=1.0, v=None):
    """Symmetric stable driver, alpha in (1, 2): SM iff f is AC and int |fdot|^alpha dt < inf."""
    if not 1.0 < alpha < 2.0:
        raise DomainError(f"stable closed form needs alpha in (1, 2), got {alpha}")
    name = closed_form_basis("stable")
    v = _default_mark(kernel) if v is None else v
    bad = _ac_or_report(kernel, name)
    if bad:
        return bad
    iv = time_integral(kernel, v, lambda u: u**alpha, (alpha, alpha))
    const = stable_psi_constant(alpha, c)
    rep = CriteriaReport(INCONCLUSIVE, name, constant=const)
    rep.integrals["stable_time_integral"] = iv
    if iv.finite is None:
        rep.reason = iv.note
    elif iv.finite:
        rep.verdict, rep.reason = SEMIMARTINGALE, "int |fdot|^alpha dt < inf"
    else:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, iv.note
    return rep


def closed_form_tempered(kernel, alpha, lam, c=1.0, v=None):
    """Tempered stable driver: SM iff int (|fdot|^alpha ^ |fdot|^2) dt < inf."""
    if not 1.0 <= alpha < 2.0 or lam <= 0:
        raise DomainError(f"tempered closed form needs alpha in [1, 2) and lam > 0, got {alpha}, {lam}")
    name = closed_form_basis("tempered")
    v = _default_mark(kernel) if v is None else v
    bad = _ac_or_report(kernel, name)
    if bad:
        return bad
    iv = time_integral(kernel, v, lambda u: min(u**alpha, u * u), (2.0, alpha))
    rep = CriteriaReport(INCONCLUSIVE, name)
    rep.integrals["tempered_time_integral"] = iv
    if iv.finite is None:
        rep.reason = iv.note
    elif iv.finite:
        rep.verdict, rep.reason = SEMIMARTINGALE, "int (|fdot|^alpha ^ |fdot|^2) dt < inf"
    else:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, iv.note
    return rep


def _endpoint_ok(marks, small_exp, large_exp):
    """Exponent check of int h(v) m(dv) with h ~ |v|^small at 0 and |v|^large at inf."""
    for end, q in ((marks.lo, marks.lo_exponent), (marks.hi, marks.hi_exponent)):
        if math.isinf(end):
            if q is None:
                return False, None, f"density exponent at {end} not declared"
            if large_exp + q >= -1.0 - TOL:
                return False, True, f"integrand ~ |v|^{large_exp + q:.6g} at {end}"
        elif end == 0.0:
            if q is None:
                return False, None, "density exponent at 0 not declared"
            if small_exp + q <= -1.0 + TOL:
                return False, True, f"integrand ~ |v|^{small_exp + q:.6g} at 0"
        elif q is not None and q <= -1.0 + TOL:
            return False, True, f"density not integrable at {end}"
    return True, True, ""


def mark_power_integral(marks, h, small_exp, large_exp):
    """int h(v) m(dv) certified by exponents; exact sums for atomic marks."""
    if isinstance(marks, lm.DiscreteMarks):
        vals = [w * h(v) for v, w in marks.atoms()]
        if all(math.isfinite(x) for x in vals):
            return IntegralValue(math.fsum(vals), True, "closed_form")
        return _infinite("infinite term")
    if isinstance(marks, lm.SequenceMarks):
        return _series_total([w * h(v) for v, w in marks.atoms()], "")
    ok, decided, why = _endpoint_ok(marks, small_exp, large_exp)
    if not ok:
        return _infinite(why) if decided else _unknown(why)
    val = quadrature.integrate_interval(lambda v: h(v) * marks.density(v), marks.lo, marks.hi, (-1.0, 1.0))
    return IntegralValue(val, True, "exponent+quadrature")


def closed_form_supou(marks, rho, sigma2=0.0):
    """supOU: SM iff int psi(|v|) |v|^-1 m(dv) < inf (stable: int |v|^{alpha-1} m(dv) < inf)."""
    name = closed_form_basis("supOU")
    if isinstance(rho, lm.CompoundPoisson) and not rho.atoms and sigma2 == 0.0:
        raise NonDeterministic("neither Gaussian part nor jumps")
    if isinstance(marks, lm.DensityMarks):
        if marks.hi > 0:
            raise DomainError("supOU marks must be supported on (-inf, 0)")
    elif any(v >= 0 for v, _ in marks.atoms()):
        raise DomainError("supOU marks must be negative")
    well = mark_power_integral(marks, lambda v: 1.0 / abs(v), -1.0, -1.0)
    if well.finite is False:
        raise WellDefinednessViolation(f"int |v|^-1 m(dv) = inf: {well.note}")
    rep = CriteriaReport(INCONCLUSIVE, name)
    rep.integrals["well_definedness"] = well
    if sigma2 > 0:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, "Gaussian part with OU kernel violates the Gaussian condition"
        return rep
    u0 = lm.ratio_u0(rho).status
    u00 = lm.ratio_u00(lm.RandomMeasureSpec(lm.DiscreteMarks((-1.0,), (1.0,)), rho)).status
    rep.assumptions = {"ratio_tail": u0 is Status.SATISFIED, "ratio_uniform": u00 is Status.SATISFIED}
    if isinstance(rho, lm.SymmetricStable) and 1.0 < rho.alpha < 2.0:
        a = rho.alpha
        const = stable_psi_constant(a, rho.c)
        iv = mark_power_integral(marks, lambda v: const * abs(v) ** (a - 1.0), a - 1.0, a - 1.0)
        rep.integrals["supou_integral"] = iv
        rep.constant = const
        regular = True
    else:
        try:
            exps = lm.psi_exponents(rho)
        except ExponentsUnknown as exc:
            rep.reason = str(exc)
            return rep
        if exps is None:
            rep.integrals["supou_integral"] = _infinite("psi is infinite")
            rep.reason = "psi is infinite: tail index >= -1"
            return rep
        iv = mark_power_integral(marks, lambda v: lm.psi_integral(v, rho) / abs(v), exps[0] - 1.0, exps[1] - 1.0)
        rep.integrals["supou_integral"] = iv
        regular = u0 is Status.SATISFIED and u00 is Status.SATISFIED
    if iv.finite is None:
        rep.reason = iv.note
    elif iv.finite:
        rep.verdict, rep.reason = SEMIMARTINGALE, "supOU integral finite"
    elif regular:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, iv.note
    else:
        rep.reason = "supOU integral infinite but regular-variation conditions not certified"
    return rep


def closed_form_multistable(kernel, alpha, c, marks):
    """Multi-stable driver: SM iff int_V (2 - alpha(v))^-1 int |fdot|^{alpha(v)} ds m(dv) < inf."""
    name = closed_form_basis("multistable")
    probe = [v for v, _ in marks.atoms()] if not isinstance(marks, lm.DensityMarks) else list(marks.sample_points())
    alphas = [float(alpha(v)) for v in probe]
    if min(alphas) <= 1.0 or max(alphas) >= 2.0:
        raise DomainError("multi-stable closed form needs alpha(v) in (r, 2) with r > 1")
    bad = _ac_or_report(kernel, name)
    if bad:
        return bad

    def per_mark(v):
        a = float(alpha(v))
        iv = time_integral(kernel, v, lambda u: u**a, (a, a))
        if iv.finite:
            return IntegralValue(c * iv.value / (2.0 - a), True, iv.method)
        return iv

    spec = lm.RandomMeasureSpec(marks, lambda v: lm.SymmetricStable(float(alpha(v)), c))
    iv = mark_integral(spec, kernel, per_mark)
    rep = CriteriaReport(INCONCLUSIVE, name)
    rep.integrals["multistable_integral"] = iv
    if iv.finite is None:
        rep.reason = iv.note
    elif iv.finite:
        rep.verdict, rep.reason = SEMIMARTINGALE, "multi-stable integral finite"
    else:
        rep.verdict, rep.reason = NOT_SEMIMARTINGALE, iv.note
    return rep


def closed_form_supflp(spec, gamma):
    """Superposed fractional Levy processes with mark-dependent gamma(v)."""
    name = closed_form_basis("supFLP")
    rep = CriteriaReport(INCONCLUSIVE, name)
    gfun = gamma if callable(gamma) else (lambda v, _g=gamma: _g)
    invar = infinite_variation_everywhere(spec)
    rep.assumptions["infinite_variation_driver"] = invar
    marks = spec.probe_marks()
    exact = not isinstance(spec.marks, lm.DensityMarks)
    big_gamma = [v for v in marks if gfun(v) >= 0.5]
    gaussian = [v for v in marks if spec.sigma2(v) > 0]

    def per_mark(v):
        g = float(gfun(v))
        if g >= 0.5:
            return _infinite(f"gamma({v}) >= 1/2")
        q = 1.0 / (1.0 - g)
        rho = spec.rho(v)
        try:
            finite = lm.moment_finite(rho, q)
        except ExponentsUnknown as exc:
            return _unknown(str(exc))
        if not finite:
            return _infinite(f"int |x|^{q:.6g} rho_v(dx) = inf at v={v}")
        return IntegralValue(lm.abs_moment(rho, q) / (0.5 - g), True, "closed_form")

    if exact and (big_gamma or gaussian):
        if big_gamma:
            rep.verdict, rep.reason = NOT_SEMIMARTINGALE, f"gamma >= 1/2 at mark {big_gamma[0]}"
        elif invar is True:
            rep.verdict, rep.reason = NOT_SEMIMARTINGALE, f"Gaussian part at mark {gaussian[0]}"
        else:
            rep.reason = "Gaussian part on some marks without uniform infinite variation"
        return rep
    kernel = kn.Fractional(gfun)
    iv = mark_integral(spec, kernel, per_mark)
    rep.integrals["supflp_integral"] = iv
    if iv.finite:
        rep.verdict, rep.reason = SEMIMARTINGALE, "superposed fractional integral finite"
        return rep
    if invar is True and exact:
        nece = _every_mark(spec, kernel, per_mark)
        if nece.finite is False:
            rep.verdict, rep.reason = NOT_SEMIMARTINGALE, nece.note
            return rep
    rep.reason = iv.note or "necessity hypotheses not certified"
    return rep


# ---------------------------------------------------------------------------
# combined verdict
# ---------------------------------------------------------------------------


def _special_route(spec, kernel):
    """Closed form applicable to the instance, if any."""
    single = isinstance(spec.marks, lm.DiscreteMarks) and len(spec.marks.points) == 1
    if isinstance(kernel, kn.Fractional) and not callable(kernel.gamma) and kernel.f0_mode == kn.SAME_AS_F:
        if single or _spec_mark_free(spec):
            v = spec.probe_marks()[0]
            if single or not isinstance(spec.marks, lm.DensityMarks):
                return closed_form_fractional(spec.rho(v), spec.sigma2(v), kernel.gamma)
    if isinstance(kernel, kn.ExponentialOU) and isinstance(spec.marks, lm.DensityMarks) and _spec_mark_free(spec):
        return closed_form_supou(spec.marks, spec.levy, float(spec.gaussian_var))
    return None


def verdict(spec, kernel):
    """Decide the semimartingale property and record every condition evaluated."""
    spec.check_nondeterministic()
    integrals = {}
    drift = check_drift(spec, kernel)
    integrals["drift"] = drift
    assumptions = {"drift": drift.finite}
    invar = infinite_variation_everywhere(spec)
    assumptions["infinite_variation_driver"] = invar

    if invar is False:
        fv = closed_form_fv(kernel, spec)
        integrals["fv_integral"] = IntegralValue(fv.value, fv.finite_variation or None, "exponent+quadrature", fv.reason)
        if fv:
            if kernel.absolutely_continuous:
                integrals["jump_integral"] = check_sufficient(spec, kernel)
                integrals["gaussian"] = check_gaussian(spec, kernel)
            return CriteriaReport(SEMIMARTINGALE, closed_form_basis("fv"), integrals, assumptions, fv.reason)

    if kernel.absolutely_continuous:
        gauss = check_gaussian(spec, kernel)
        cf = check_sufficient(spec, kernel)
        integrals["gaussian"] = gauss
        integrals["jump_integral"] = cf
        if drift.finite and gauss.finite and cf.finite:
            return CriteriaReport(SEMIMARTINGALE, SUFFICIENT, integrals, assumptions, "sufficient conditions hold")

    nec = check_necessary(spec, kernel)
    integrals.update(nec.integrals)
    assumptions.update(nec.assumptions)
    if nec.status == "violated":
        rep = CriteriaReport(NOT_SEMIMARTINGALE, NECESSITY, integrals, assumptions, f"violated: {nec.which}")
        if nec.which == "absolute_continuity":
            integrals["absolute_continuity"] = _infinite("kernel not absolutely continuous")
        return rep

    if invar is not False:
        fv = closed_form_fv(kernel, spec)
        if fv:
            integrals["fv_integral"] = IntegralValue(fv.value, True, "exponent+quadrature", fv.reason)
            return CriteriaReport(SEMIMARTINGALE, closed_form_basis("fv"), integrals, assumptions, fv.reason)

    special = _special_route(spec, kernel)
    if special is not None and special.verdict != INCONCLUSIVE:
        special.integrals = {**integrals, **special.integrals}
        special.assumptions = {**assumptions, **special.assumptions}
        return special

    blocking = []
    if nec.status == "not_applicable":
        blocking.append("driver has finite variation on some marks")
    elif nec.status == "unknown":
        blocking.append(f"undecided: {nec.which}")
    for name, iv in integrals.items():
        if iv.finite is None and iv.note:
            blocking.append(f"{name}: {iv.note}")
    reason = "; ".join(dict.fromkeys(blocking)) or "no condition decided the instance"
    return CriteriaReport(INCONCLUSIVE, UNDECIDABLE, integrals, assumptions, reason)
