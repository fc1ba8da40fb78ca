"""Exact never-connect decision for a pair of rational slopes.

A pair with 0 < r < 1 < rho never connects (NC) when r^k = rho^l has no
integer solution besides k = l = 0, i.e. the prime exponent vectors of r
and rho are not parallel over the rationals. The test cross-multiplies
exponent entries, so no logarithms and no rounding are involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import NcViolation, PreconditionError
from .scalars import factor, format_scalar, power


@dataclass(frozen=True)
class NcVerdict:
    """Outcome of the never-connect check.

    `witness` is present exactly when the pair is dependent; it is the
    minimal integer pair (k, l) with k > 0 and r^k == rho^l.
    """

    is_nc: bool
    witness: tuple[int, int] | None = None

    def __post_init__(self):
        if self.is_nc == (self.witness is not None):
            raise ValueError("witness must be present exactly when the pair is dependent")

    def to_json_dict(self) -> dict:
        return {
            "is_nc": self.is_nc,
            "witness": list(self.witness) if self.witness is not None else None,
        }


def check_nc(r: Fraction, rho: Fraction) -> NcVerdict:
    """Decide exactly whether (r, rho) never connect.

    Raises PreconditionError when the pair is outside 0 < r < 1 < rho; a
    wrong range is a different failure from multiplicative dependence and
    is never reported as is_nc=False.
    """
    r = Fraction(r)
    rho = Fraction(rho)
    if not 0 < r < 1:
        raise PreconditionError(
            f"never-connect requires 0 < r < 1, got r = {format_scalar(r)}"
        )
    if not rho > 1:
        raise PreconditionError(
            f"never-connect requires rho > 1, got rho = {format_scalar(rho)}"
        )
    exp_r = factor(r)
    exp_rho = factor(rho)
    if set(exp_r) != set(exp_rho):
        return NcVerdict(True)
    ratio = None  # common value of exp_r[p] / exp_rho[p] when the vectors are parallel
    for p, e in exp_r.items():
        this = Fraction(e, exp_rho[p])
        if ratio is None:
            ratio = this
        elif this != ratio:
            return NcVerdict(True)
    # Parallel vectors: k*exp_r = l*exp_rho forces l/k = ratio, so the minimal
    # witness with k > 0 is the reduced (denominator, numerator) pair.
    k, l = ratio.denominator, ratio.numerator
    assert power(r, k) == power(rho, l)
    return NcVerdict(False, (k, l))


def require_nc(r: Fraction, rho: Fraction) -> None:
    """Raise NcViolation unless (r, rho) never connect."""
    verdict = check_nc(r, rho)
    if not verdict.is_nc:
        k, l = verdict.witness
        raise NcViolation(
            f"slopes are multiplicatively dependent: "
            f"({format_scalar(Fraction(r))})^{k} == ({format_scalar(Fraction(rho))})^{l}",
            witness=verdict.witness,
        )
