"""Five-parameter description (q, eta, theta, sigma, tau) of a quadratic harness."""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from pathlib import Path

from . import scalars
from .scalars import Scalar, is_exact

FIELDS = ("q", "eta", "theta", "sigma", "tau")


@dataclass(frozen=True)
class ParamSet:
    q: Scalar
    eta: Scalar
    theta: Scalar
    sigma: Scalar
    tau: Scalar

    @classmethod
    def exact(cls, q=0, eta=0, theta=0, sigma=0, tau=0) -> "ParamSet":
        return cls(*(scalars.to_exact(v) for v in (q, eta, theta, sigma, tau)))

    @classmethod
    def floats(cls, q=0.0, eta=0.0, theta=0.0, sigma=0.0, tau=0.0) -> "ParamSet":
        return cls(*(scalars.to_float(v) for v in (q, eta, theta, sigma, tau)))

    @classmethod
    def from_dict(cls, d: dict, exact: bool = True) -> "ParamSet":
        missing = [k for k in FIELDS if k not in d]
        if missing:
            raise KeyError(f"parameter set is missing {missing}")
        conv = scalars.to_exact if exact else scalars.to_float
        return cls(*(conv(d[k]) for k in FIELDS))

    @classmethod
    def load(cls, path, exact: bool = True) -> "ParamSet":
        return cls.from_dict(json.loads(Path(path).read_text()), exact=exact)

    def to_dict(self) -> dict:
        return {k: scalars.fmt(getattr(self, k)) for k in FIELDS}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @property
    def is_exact(self) -> bool:
        return all(is_exact(getattr(self, f.name)) for f in fields(self))

    @property
    def sigma_tau(self):
        return self.sigma * self.tau

    def as_float(self) -> "ParamSet":
        return ParamSet(*(float(getattr(self, k)) for k in FIELDS))

    def as_exact(self) -> "ParamSet":
        return ParamSet(*(scalars.to_exact(getattr(self, k)) for k in FIELDS))

    def with_(self, **kw) -> "ParamSet":
        return replace(self, **kw)


# -- admissibility -----------------------------------------------------------

@dataclass(frozen=True)
class Constraint:
    name: str
    holds: bool | None  # None: process-level hypothesis, not decidable from scalars
    detail: str = ""


@dataclass(frozen=True)
class AdmissibilityReport:
    constraints: tuple

    @property
    def admissible(self) -> bool:
        return all(c.holds for c in self.constraints if c.holds is not None)

    def __getitem__(self, name) -> Constraint:
        for c in self.constraints:
            if c.name == name:
                return c
        raise KeyError(name)

    def violated(self):
        return [c.name for c in self.constraints if c.holds is False]

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "constraints": [
                {"name": c.name, "holds": "assumed" if c.holds is None else c.holds,
                 "detail": c.detail}
                for c in self.constraints
            ],
        }


def q_upper_bound_holds(q, sigma_tau) -> bool:
    """q <= 1 + 2 sqrt(sigma*tau), decided without irrational intermediates."""
    if sigma_tau < 0:
        return False
    if q <= 1:
        return True
    if is_exact(q) and is_exact(sigma_tau):
        return (q - 1) ** 2 <= 4 * sigma_tau
    return q <= 1 + 2 * math.sqrt(sigma_tau) + scalars.FLOAT_TOL


def q_at_most_classical(q, sigma_tau) -> bool:
    """q <= 1 - 2 sqrt(sigma*tau), the range where the recurrence engine is positive."""
    if sigma_tau < 0 or q > 1:
        return False
    if is_exact(q) and is_exact(sigma_tau):
        return (1 - q) ** 2 >= 4 * sigma_tau
    return q <= 1 - 2 * math.sqrt(sigma_tau) + scalars.FLOAT_TOL


def validate(p: ParamSet) -> AdmissibilityReport:
    st = p.sigma_tau
    cs = [
        Constraint("sigma_nonnegative", p.sigma >= 0, "sigma >= 0"),
        Constraint("tau_nonnegative", p.tau >= 0, "tau >= 0"),
        Constraint("q_upper_bound", q_upper_bound_holds(p.q, st), "q <= 1 + 2 sqrt(sigma tau)"),
        Constraint("sigma_tau_below_one", st < 1, "sigma tau < 1 (general recurrence engine)"),
        Constraint("not_q_minus_one_st_one", not (p.q == -1 and st == 1), "(q, sigma tau) != (-1, 1)"),
        Constraint("F_nonzero", None, "F_{t,s,u} != 0 for all 0<s<t<u"),
        Constraint("linear_independence", None,
                   "1, X_s, X_t, X_s X_t, X_s^2, X_t^2 linearly independent"),
    ]
    return AdmissibilityReport(tuple(cs))


def time_invert(p: ParamSet) -> ParamSet:
    """Parameters of the time-inverse process t X_{1/t}: eta<->theta, sigma<->tau."""
    return ParamSet(p.q, p.theta, p.eta, p.tau, p.sigma)


# -- families -----------------------------------------------------------------

class FamilyTag(str, enum.Enum):
    FREE = "free"
    CLASSICAL = "classical"
    SIGMA_ZERO = "sigma0"
    TAU_ZERO = "tau0"
    QMEIXNER = "qmeixner"
    BIPOISSON = "bipoisson"
    GENERAL = "general"


def _zero(x) -> bool:
    return scalars.is_zero(x)


def is_classical(p: ParamSet) -> bool:
    st = p.sigma_tau
    if st < 0:
        return False
    if p.is_exact:
        return p.q <= 1 and (1 - p.q) ** 2 == 4 * st
    return abs(p.q - (1 - 2 * math.sqrt(st))) <= scalars.FLOAT_TOL


def classify(p: ParamSet) -> frozenset:
    tags = set()
    if _zero(p.q + p.sigma_tau):
        tags.add(FamilyTag.FREE)
    if is_classical(p):
        tags.add(FamilyTag.CLASSICAL)
    if _zero(p.sigma):
        tags.add(FamilyTag.SIGMA_ZERO)
    if _zero(p.tau):
        tags.add(FamilyTag.TAU_ZERO)
    if _zero(p.sigma) and _zero(p.eta):
        tags.add(FamilyTag.QMEIXNER)
    if _zero(p.sigma) and _zero(p.tau):
        tags.add(FamilyTag.BIPOISSON)
    if not tags:
        tags.add(FamilyTag.GENERAL)
    return frozenset(tags)


def classical_rho(p: ParamSet):
    """rho = sqrt(sigma tau) for a classical parameter set; rational whenever q is."""
    if not is_classical(p):
        raise ValueError("parameter set is not classical")
    return (1 - p.q) / 2


PRESETS = {
    "brownian": dict(q=1, eta=0, theta=0, sigma=0, tau=0),
    "qmeixner": dict(q="1/2", eta=0, theta="1/3", sigma=0, tau="1/5"),
    "bipoisson": dict(q="1/2", eta="1/4", theta="1/2", sigma=0, tau=0),
    "free": dict(q="-1/8", eta="1/3", theta="1/5", sigma="1/2", tau="1/4"),
    "classical": dict(q="1/2", eta="1/3", theta="1/5", sigma="1/4", tau="1/4"),
    "general": dict(q="1/4", eta="1/3", theta="-1/5", sigma="1/3", tau="1/7"),
}


def preset(name: str, exact: bool = True) -> ParamSet:
    return ParamSet.from_dict(PRESETS[name], exact=exact)


def zero_params(exact: bool = True) -> ParamSet:
    z = Fraction(0) if exact else 0.0
    return ParamSet(z, z, z, z, z)
