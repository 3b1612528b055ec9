"""Common-ratio certification for several target points at once.

A ratio lambda is common to targets y_1..y_p when every y_i lies in the
attractor at that ratio. Covers intersect to an outer cover of the common
set; exact rational witnesses are found by replayable greedy-cycle probes;
non-rational candidates are pinned by coding enclosures that must agree to
a stated tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd

from .cantor_metrics import newhouse_lower
from .constructions import thickness_Cl
from .errors import InvalidInput, NoneFound, OutOfRange
from .ifs_core import Member, greedy_digits
from .lambda_set import (CoverInterval, IntervalCover, binary_expansion,
                         cover, psi_inverse)
from .numerics import (DEFAULT_CONFIG, Dyadic, Enclosure, PrecisionConfig,
                       Rational)
from .seqcode import EpSequence, Word, lex_max, lex_min, SEQ_01INF

__all__ = [
    "CommonPointCertificate",
    "ProductDimReport",
    "intersect_covers",
    "find_common",
    "product_dim_report",
]

HALF = Fraction(1, 2)


@dataclass(frozen=True, slots=True)
class CommonPointCertificate:
    """A ratio at which all targets are certified or conjectured members.

    Exact: rational ratio, every target's greedy orbit cycles (replayable).
    Certified: per-target coding enclosures mutually overlap at tolerance.
    Candidate: all targets survive a forced-digit run, no periodic pinning.
    """

    targets: tuple[Fraction, ...]
    lam: Enclosure
    lam_exact: Fraction | None
    per_target_codings: tuple[EpSequence, ...]
    status: str

    def sort_key(self) -> Fraction:
        return self.lam.mid_fraction()

    def to_json(self) -> dict:
        return {
            "targets": [str(t) for t in self.targets],
            "lam": self.lam.to_json(),
            "lam_exact": None if self.lam_exact is None else str(self.lam_exact),
            "codings": [str(s) for s in self.per_target_codings],
            "status": self.status,
        }


def _outer(iv: CoverInterval) -> tuple[Fraction, Fraction]:
    return iv.lo.lo.to_fraction(), iv.hi.hi.to_fraction()


def _intersect_pair(a: IntervalCover, b: IntervalCover,
                    bits: int) -> list[CoverInterval]:
    out: list[CoverInterval] = []
    i = j = 0
    while i < len(a.intervals) and j < len(b.intervals):
        alo, ahi = a.intervals[i].lo.lo, a.intervals[i].hi.hi
        blo, bhi = b.intervals[j].lo.lo, b.intervals[j].hi.hi
        lo, hi = max(alo, blo), min(ahi, bhi)
        if lo <= hi:
            # exact dyadic endpoints from the inputs; no re-rounding
            out.append(CoverInterval(Enclosure.point(lo, bits),
                                     Enclosure.point(hi, bits), None, None))
        if ahi < bhi:
            i += 1
        else:
            j += 1
    return out


def intersect_covers(covers: list[IntervalCover]) -> IntervalCover:
    """Outer cover of the intersection of the covered ratio sets."""
    if not covers:
        raise InvalidInput("no covers given")
    result = covers[0]
    bits = result.precision.precision_bits
    for other in covers[1:]:
        merged = _intersect_pair(result, other, bits)
        result = IntervalCover(max(result.x, other.x),
                               min(result.depth, other.depth),
                               tuple(merged), result.precision)
    return result


def _forced_digits(y: Fraction, lam: Enclosure,
                   max_digits: int) -> tuple[list[int], str]:
    """Greedy digits of y valid for every ratio in `lam`, while decidable."""
    bits = lam.bits
    one = Enclosure.exact_int(1, bits)
    threshold = one - lam
    state = Enclosure.from_fraction(y, bits)
    digits: list[int] = []
    for _ in range(max_digits):
        if state.lo >= threshold.hi:
            digits.append(1)
            state = (state - threshold).div(lam)
        elif state.hi <= lam.lo:
            digits.append(0)
            state = state.div(lam)
        elif state.lo > lam.hi and state.hi < threshold.lo:
            return digits, "rejected"
        else:
            return digits, "ambiguous"
    return digits, "ok"


def _candidate_codings(y: Fraction, digits: list[int]) -> list[EpSequence]:
    w = Word(tuple(digits))
    ys = binary_expansion(y)
    return [lex_min(EpSequence(w, Word((1,))), SEQ_01INF),
            lex_max(EpSequence(w, Word((0,))), ys)]


def _pin_candidate(targets: list[Fraction], s0: EpSequence,
                   cfg: PrecisionConfig,
                   tolerance: Fraction) -> CommonPointCertificate | None:
    """Try to agree all targets on the ratio pinned by target 0's coding."""
    tight = cfg.with_(target_width=min(cfg.target_width, tolerance / 4))
    lam = psi_inverse(targets[0], s0, tight)
    codings = [s0]
    status = "Certified"
    current = lam
    for y in targets[1:]:
        digits, outcome = _forced_digits(y, lam, 48)
        if outcome == "rejected":
            return None
        best = None
        for s in _candidate_codings(y, digits):
            enc = psi_inverse(y, s, tight)
            if enc.overlaps(current):
                joint = Enclosure(max(enc.lo, current.lo),
                                  min(enc.hi, current.hi), enc.bits)
                if joint.width() <= tolerance:
                    best = (s, joint)
                    break
        if best is None:
            status = "Candidate"
            codings.append(_candidate_codings(y, digits)[0])
        else:
            codings.append(best[0])
            current = best[1]
    return CommonPointCertificate(tuple(targets), current, None,
                                  tuple(codings), status)


def find_common(targets: list[Rational], search_depth: int,
                cfg: PrecisionConfig = DEFAULT_CONFIG,
                max_certificates: int = 24,
                tolerance: Fraction = Fraction(1, 1 << 60)) -> list[CommonPointCertificate]:
    """Certificates of common ratios for all targets, sorted by ratio.

    Always contains the ratio-1/2 certificate (the attractor is the full
    interval there). Rational common ratios are searched by greedy-cycle
    replay up to a denominator budget that grows with `search_depth`;
    remaining candidate regions from the intersected covers get coding
    pinning attempts.
    """
    targets = [Fraction(t) for t in targets]
    if not targets:
        raise InvalidInput("no targets given")
    if any(not 0 < t < HALF for t in targets):
        raise OutOfRange("targets must lie in (0, 1/2)")
    if search_depth < 1:
        raise ValueError("search_depth must be positive")
    bits = cfg.precision_bits
    certs: list[CommonPointCertificate] = [CommonPointCertificate(
        tuple(targets), Enclosure.point(Dyadic(1, -1), bits), HALF,
        tuple(binary_expansion(y) for y in targets), "Exact")]

    floor_lam = max(targets)
    q_cap = 40 + 12 * search_depth
    found_exact: set[Fraction] = {HALF}
    for q in range(2, q_cap + 1):
        if len(certs) >= max_certificates:
            break
        for p in range(ceil(floor_lam * q), (q + 1) // 2):
            if gcd(p, q) != 1:
                continue
            lam = Fraction(p, q)
            if lam in found_exact or lam < floor_lam:
                continue
            outcomes = [greedy_digits(y, lam, 600) for y in targets]
            if all(isinstance(o, Member) for o in outcomes):
                found_exact.add(lam)
                certs.append(CommonPointCertificate(
                    tuple(targets), Enclosure.from_fraction(lam, bits), lam,
                    tuple(o.coding for o in outcomes), "Exact"))
                if len(certs) >= max_certificates:
                    break

    if len(certs) < max_certificates and len(targets) > 1:
        inter = intersect_covers([cover(y, search_depth, cfg) for y in targets])
        lead = cover(targets[0], search_depth, cfg)
        for iv in inter.intervals[:-1]:     # skip the block at 1/2: covered above
            lo, hi = _outer(iv)
            if any(c.lam_exact is not None and lo <= c.lam_exact <= hi
                   for c in certs):
                continue
            seed = next((civ.low_code for civ in lead.intervals
                         if civ.low_code is not None
                         and lo <= civ.lo.hi.to_fraction() <= hi), None)
            if seed is None:
                continue
            pinned = _pin_candidate(targets, seed, cfg, tolerance)
            if pinned is not None:
                certs.append(pinned)
            if len(certs) >= max_certificates:
                break

    certs.sort(key=CommonPointCertificate.sort_key)
    if not certs:
        raise NoneFound("no certificates within the search budget")
    return certs


@dataclass(frozen=True, slots=True)
class ProductDimReport:
    """Per-target truncated thickness bounds and their minimum.

    The combined value is heuristic evidence about the common-ratio set in
    the spirit of the thickness intersection mechanism; it is not a claimed
    dimension of the intersection.
    """

    targets: tuple[Fraction, ...]
    per_target: tuple[dict, ...]
    combined_lower: float
    combination: str

    def to_json(self) -> dict:
        return {"targets": [str(t) for t in self.targets],
                "per_target": list(self.per_target),
                "combined_lower": self.combined_lower,
                "combination": self.combination}


def product_dim_report(targets: list[Rational], ell_range: range,
                       cfg: PrecisionConfig = DEFAULT_CONFIG,
                       k_max: int = 5, q_max: int = 2) -> ProductDimReport:
    """Newhouse lower bounds from the tail constructions, per target."""
    targets = [Fraction(t) for t in targets]
    if not targets:
        raise InvalidInput("no targets given")
    if any(not 0 < t < HALF for t in targets):
        raise OutOfRange("targets must lie in (0, 1/2)")
    rows = []
    for y in targets:
        best = None
        for ell in ell_range:
            rep = thickness_Cl(y, ell, k_max, q_max, cfg)
            bound = newhouse_lower(rep.tau_truncated)
            if best is None or bound > best["newhouse_lower"]:
                best = {"target": str(y), "ell": ell,
                        "tau_truncated": float(rep.tau_truncated),
                        "newhouse_lower": bound,
                        "bound_violations": len(rep.bound_violations)}
        rows.append(best)
    return ProductDimReport(
        tuple(targets), tuple(rows),
        min(r["newhouse_lower"] for r in rows),
        "min of per-target truncated Newhouse bounds (heuristic, "
        "not a certified intersection dimension)")
