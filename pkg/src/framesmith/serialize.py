"""JSON codecs for the exact types and the self-validating family file.

Rationals are serialized as "num/den" strings (pi units) so no float ever
contaminates an exact value; canonical dumps are sorted and newline-terminated
so identical objects produce byte-identical files.  Loading a family re-checks
the family invariants and refuses inconsistent files, naming the invariant.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from typing import Dict, List, Tuple

from . import __version__
from .construction import ScalingFamily, WaveletFamily
from .intervals import IntervalSet
from .piecewise import PiecewiseLinear, SqrtProfile
from .rationals import format_ratio, parse_ratio

FORMAT_VERSION = "framesmith/1"


class ParseError(ValueError):
    """Malformed JSON payload; message carries the offending location."""


def _ratio_in(x, where: str) -> Fraction:
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return parse_ratio(x)
        except ValueError as e:
            raise ParseError(f"{where}: {e}") from None
    raise ParseError(f"{where}: expected rational string, got {type(x).__name__}")


def intervalset_to_jsonable(s: IntervalSet) -> list:
    return [[format_ratio(lo), format_ratio(hi)] for lo, hi in s.pieces]


def intervalset_from_jsonable(obj, where: str = "intervals") -> IntervalSet:
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list of [lo, hi] pairs")
    pairs = []
    for i, pair in enumerate(obj):
        if not isinstance(pair, list) or len(pair) != 2:
            raise ParseError(f"{where}[{i}]: expected [lo, hi]")
        pairs.append((_ratio_in(pair[0], f"{where}[{i}].lo"),
                      _ratio_in(pair[1], f"{where}[{i}].hi")))
    return IntervalSet.of(*pairs)


def pwl_to_jsonable(f: PiecewiseLinear) -> list:
    return [{"piece": [format_ratio(lo), format_ratio(hi)],
             "alpha": format_ratio(a), "beta": format_ratio(b)}
            for lo, hi, a, b in f.pieces]


def pwl_from_jsonable(obj, where: str = "pwl") -> PiecewiseLinear:
    if not isinstance(obj, list):
        raise ParseError(f"{where}: expected a list of pieces")
    pieces = []
    for i, item in enumerate(obj):
        loc = f"{where}[{i}]"
        if not isinstance(item, dict) or "piece" not in item:
            raise ParseError(f"{loc}: expected {{piece, alpha, beta}}")
        lo = _ratio_in(item["piece"][0], f"{loc}.piece.lo")
        hi = _ratio_in(item["piece"][1], f"{loc}.piece.hi")
        alpha = _ratio_in(item.get("alpha", 0), f"{loc}.alpha")
        beta = _ratio_in(item.get("beta", 0), f"{loc}.beta")
        pieces.append((lo, hi, alpha, beta))
    try:
        return PiecewiseLinear(tuple(pieces))
    except ValueError as e:
        raise ParseError(f"{where}: {e}") from None


def profile_to_jsonable(p: SqrtProfile) -> dict:
    return {"square": pwl_to_jsonable(p.square),
            "domain": intervalset_to_jsonable(p.domain)}


def profile_from_jsonable(obj, where: str = "profile") -> SqrtProfile:
    if not isinstance(obj, dict) or "square" not in obj:
        raise ParseError(f"{where}: expected {{square, domain}}")
    sq = pwl_from_jsonable(obj["square"], f"{where}.square")
    dom = intervalset_from_jsonable(obj.get("domain", []), f"{where}.domain")
    try:
        return SqrtProfile(sq, dom if dom else sq.support())
    except ValueError as e:
        raise ParseError(f"{where}: {e}") from None


def family_to_jsonable(scaling: ScalingFamily, wavelets: WaveletFamily,
                       input_digest: str) -> dict:
    return {
        "version": FORMAT_VERSION,
        "dilation": wavelets.dilation,
        "sigma": pwl_to_jsonable(wavelets.sigma),
        "partition": [intervalset_to_jsonable(layer)
                      for layer in wavelets.partition],
        "psis": [profile_to_jsonable(p) for p in wavelets.psis],
        "phis": {str(k): profile_to_jsonable(scaling.phis[k])
                 for k in sorted(scaling.phis)},
        "provenance": {"input_digest": input_digest,
                       "tool": f"framesmith {__version__}"},
    }


def family_from_jsonable(obj) -> Tuple[ScalingFamily, WaveletFamily]:
    if not isinstance(obj, dict):
        raise ParseError("family: expected an object")
    if obj.get("version") != FORMAT_VERSION:
        raise ParseError(f"family.version: expected {FORMAT_VERSION!r}, "
                         f"got {obj.get('version')!r}")
    a = obj.get("dilation")
    if not isinstance(a, int) or abs(a) < 2:
        raise ParseError("family.dilation: expected integer |a| >= 2")
    sigma = pwl_from_jsonable(obj.get("sigma", []), "family.sigma")
    partition = tuple(intervalset_from_jsonable(x, f"family.partition[{i}]")
                      for i, x in enumerate(obj.get("partition", [])))
    psis = tuple(profile_from_jsonable(x, f"family.psis[{i}]")
                 for i, x in enumerate(obj.get("psis", [])))
    phis: Dict[int, SqrtProfile] = {}
    for key, val in obj.get("phis", {}).items():
        try:
            k = int(key)
        except ValueError:
            raise ParseError(f"family.phis[{key!r}]: key must be an integer") from None
        phis[k] = profile_from_jsonable(val, f"family.phis[{key}]")
    scaling = ScalingFamily(phis, sigma, a)
    wavelets = WaveletFamily(psis, partition, sigma, a)
    try:
        scaling.validate()
        wavelets.validate()
    except ValueError as e:
        raise ParseError(f"family invariant violated: {e}") from None
    return scaling, wavelets


def sets_from_jsonable(obj, where: str = "sets") -> List[IntervalSet]:
    """A sets file is either one interval set or a list of them."""
    if isinstance(obj, list) and obj and isinstance(obj[0], list) \
            and obj[0] and isinstance(obj[0][0], list):
        return [intervalset_from_jsonable(x, f"{where}[{i}]")
                for i, x in enumerate(obj)]
    return [intervalset_from_jsonable(obj, where)]


def sets_to_jsonable(sets: List[IntervalSet]) -> list:
    return [intervalset_to_jsonable(s) for s in sets]


def dumps_canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def digest_of(obj) -> str:
    return "sha256:" + hashlib.sha256(
        dumps_canonical(obj).encode("utf-8")).hexdigest()


def loads_json(text: str, where: str = "input"):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise ParseError(f"{where}: line {e.lineno} column {e.colno}: {e.msg}") from None
