"""Generalized Reed-Solomon codes and the naive (download-k) recovery oracle."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gf_tower import FieldTower, parse_field
from .polyring import Poly, PolyError, interpolate


class CodeError(ValueError):
    pass


def dual_multipliers(tower: FieldTower, points: Sequence[int]) -> tuple[int, ...]:
    """u_i = prod_{j != i} (a_i - a_j)^{-1}.

    With these, sum_i u_i f(a_i) g(a_i) = 0 whenever deg f + deg g <= n - 2.
    """
    pts = np.asarray([int(a) for a in points], dtype=np.int64)
    if len(set(pts.tolist())) != len(pts):
        raise CodeError("evaluation points must be distinct")
    out = []
    for i, a in enumerate(pts):
        diffs = tower.vsub(np.full(len(pts) - 1, a), np.delete(pts, i))
        out.append(tower.inv(tower.prod(int(d) for d in diffs)))
    return tuple(out)


@dataclass(frozen=True)
class GrsCode:
    """GRS_k(points, multipliers): codewords (v_i f(a_i))_i with deg f < k."""

    tower: FieldTower
    points: tuple[int, ...]
    multipliers: tuple[int, ...]
    k: int
    duals: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = len(self.points)
        if len(self.multipliers) != n:
            raise CodeError("one multiplier per evaluation point is required")
        if not 1 <= self.k < n:
            raise CodeError(f"need 1 <= k < n, got k={self.k}, n={n}")
        if n > self.tower.q:
            raise CodeError("code length exceeds the field size")
        if any(v == 0 for v in self.multipliers):
            raise CodeError("column multipliers must be nonzero")
        object.__setattr__(self, "duals", dual_multipliers(self.tower, self.points))

    @classmethod
    def reed_solomon(cls, tower: FieldTower, points: Sequence[int], k: int) -> "GrsCode":
        points = tuple(int(a) for a in points)
        return cls(tower, points, (1,) * len(points), k)

    @property
    def n(self) -> int:
        return len(self.points)

    def header(self) -> str:
        return f"n={self.n} k={self.k}"


@dataclass(frozen=True)
class Codeword:
    symbols: tuple[int, ...]
    erasures: frozenset[int] = frozenset()

    def erase(self, *positions: int) -> "Codeword":
        return Codeword(self.symbols, self.erasures | frozenset(positions))

    def __len__(self) -> int:
        return len(self.symbols)


def encode(code: GrsCode, message: Poly) -> Codeword:
    if message.degree > code.k - 1:
        raise CodeError(f"message degree {message.degree} exceeds k-1={code.k - 1}")
    vals = message.eval_many(np.array(code.points, dtype=np.int64))
    syms = code.tower.vmul(vals, np.array(code.multipliers, dtype=np.int64))
    return Codeword(tuple(int(s) for s in syms))


def random_message(code: GrsCode, rng: np.random.Generator) -> Poly:
    return Poly(code.tower, code.tower.random(rng, size=code.k))


def is_codeword(code: GrsCode, word: Codeword) -> bool:
    """Parity checks sum_i u_i (c_i / v_i) a_i^e = 0 for e = 0..n-k-1."""
    if len(word) != code.n:
        return False
    if word.erasures:
        raise CodeError("parity checks need a word without erasures")
    tw = code.tower
    raw = tw.vmul(np.array(word.symbols), tw.vinv(np.array(code.multipliers)))
    weighted = tw.vmul(raw, np.array(code.duals))
    pts = np.array(code.points, dtype=np.int64)
    power = np.ones(code.n, dtype=np.int64)
    for _ in range(code.n - code.k):
        if tw.vsum(tw.vmul(weighted, power)) != 0:
            return False
        power = tw.vmul(power, pts)
    return True


def naive_recover(code: GrsCode, word: Codeword, helpers: Sequence[int]) -> Codeword:
    """Interpolate f from k surviving positions and re-evaluate everywhere.

    This is the classical repair that downloads k whole symbols (k*t base-field
    symbols); it serves as ground truth for the trace repair.
    """
    helpers = list(dict.fromkeys(int(h) for h in helpers))
    if len(helpers) < code.k:
        raise CodeError(f"need {code.k} helpers, got {len(helpers)}")
    helpers = helpers[: code.k]
    if any(h in word.erasures for h in helpers):
        raise CodeError("helpers must avoid erased positions")
    tw = code.tower
    pts = [code.points[h] for h in helpers]
    vals = [tw.div(word.symbols[h], code.multipliers[h]) for h in helpers]
    try:
        f = interpolate(tw, pts, vals)
    except PolyError as exc:
        raise CodeError(str(exc)) from exc
    return encode(code, f)


def survivors_consistent(code: GrsCode, word: Codeword) -> bool:
    """True if the unerased symbols agree with a single codeword."""
    alive = [i for i in range(code.n) if i not in word.erasures]
    if len(alive) <= code.k:
        return True
    full = naive_recover(code, word, alive)
    return all(full.symbols[i] == word.symbols[i] for i in alive)


# ---------------------------------------------------------------------------
# codeword files
# ---------------------------------------------------------------------------

def dump_codeword(code: GrsCode, word: Codeword) -> str:
    """Text form: field/code header lines, erasure list, then one symbol per line."""
    tw = code.tower
    lines = [
        f"field: {tw.describe()}",
        f"code: {code.header()}",
        "points: " + ";".join(tw.format_element(a) for a in code.points),
        "multipliers: " + ";".join(tw.format_element(v) for v in code.multipliers),
        "erasures: " + ",".join(str(i) for i in sorted(word.erasures)),
    ]
    lines += [tw.format_element(s) for s in word.symbols]
    return "\n".join(lines) + "\n"


def load_codeword(text: str) -> tuple[GrsCode, Codeword]:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    meta = {}
    body = []
    for ln in lines:
        key, sep, rest = ln.partition(":")
        if sep and key.strip() in {"field", "code", "points", "multipliers", "erasures"}:
            meta[key.strip()] = rest.strip()
        else:
            body.append(ln)
    try:
        tw = parse_field(meta["field"])
        params = dict(item.split("=") for item in meta["code"].split())
        points = tuple(tw.parse_element(e) for e in meta["points"].split(";"))
        mults = tuple(tw.parse_element(e) for e in meta["multipliers"].split(";"))
        erased = meta.get("erasures", "")
        erasures = frozenset(int(i) for i in erased.split(",") if i.strip())
    except KeyError as exc:
        raise CodeError(f"codeword file is missing the {exc.args[0]!r} header") from exc
    code = GrsCode(tw, points, mults, int(params["k"]))
    if int(params["n"]) != code.n or len(body) != code.n:
        raise CodeError("symbol count does not match the code length")
    symbols = tuple(tw.parse_element(s) for s in body)
    return code, Codeword(symbols, erasures)
