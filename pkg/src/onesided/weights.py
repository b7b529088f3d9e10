"""Weight catalog and estimators for one-sided weight-class constants.

The catalog covers the closed forms ``scale * |x|^alpha * exp(c x)``
(constants, powers, exponentials, and their products) plus arbitrary
sampled weights.  The closed family is stable under every operation the
theory needs: dual exponents ``w -> w^{1-p'}``, factorizations
``w1 * w2^{1-p}``, dilations ``w -> w(lambda x)``, reflections, and
power bumps ``w -> w^{1+eps}``.

Estimators compute discrete suprema over lattices of anchored intervals
(anchors spread over grid indices, interval lengths log-spaced and
snapped to whole cells), so every reported constant is a lower bound of
the true supremum.  Comparisons across estimators reuse identical
interval lattices, which turns the analytic identities (duality power
law, dilation invariance, reflection symmetry) into near-bit-level test
assertions.  Interval integrals go through ``math.fsum`` where mirror
exactness matters; large-grid searches use cumulative trapezoid sums.

A search never raises on divergence: values above the configured
ceiling (or overflow to non-finite) are reported with
``finite_flag=False``, because "not in the class" is a legitimate
answer the experiments need.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import operators as _ops
from .errors import ConfigError, DomainError, GridMismatchError
from .grid import ExponentPair, SampledFunction, grid_nodes, resample

__all__ = [
    "WeightSpec",
    "TripleSearchConfig",
    "ConstantReport",
    "BumpSearchResult",
    "ap_plus_constant",
    "ap_minus_constant",
    "ap_both_constant",
    "ap_general_constant",
    "a1_constant",
    "rh_plus_constant",
    "rh_infty_constant",
    "dual_weight",
    "factor_weight",
    "dilate",
    "reflect",
    "weight_power",
    "power_bump_search",
    "gamma_fourpoint_constant",
]

DIVERGENCE_CEILING = 1.0e6  # default cap; estimators flag rather than raise


# ---------------------------------------------------------------------------
# weight catalog
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeightSpec:
    """A positive weight, either catalog-closed or sampled.

    Closed forms are stored canonically as (scale, alpha, c) for
    ``scale * |x|^alpha * exp(c x)``; the ``form`` tag records the most
    specific catalog name for reporting.
    """

    form: str                      # constant | power | exponential | product | sampled
    params: tuple = ()
    samples: Optional[SampledFunction] = None

    def __post_init__(self):
        if self.form == "sampled":
            if self.samples is None:
                raise DomainError("sampled weight requires samples")
            v = self.samples.values
            if not self.samples.is_real or np.any(v.real <= 0):
                raise DomainError("sampled weight must be real and strictly positive")
        elif self.form not in ("constant", "power", "exponential", "product"):
            raise DomainError(f"unknown weight form {self.form!r}")
        object.__setattr__(self, "params", tuple(float(p) for p in self.params))

    # -- constructors -------------------------------------------------
    @staticmethod
    def constant(c: float) -> "WeightSpec":
        if c <= 0:
            raise DomainError("constant weight must be positive")
        return WeightSpec("constant", (c,))

    @staticmethod
    def power(alpha: float) -> "WeightSpec":
        return WeightSpec("power", (alpha,))

    @staticmethod
    def exponential(c: float) -> "WeightSpec":
        return WeightSpec("exponential", (c,))

    @staticmethod
    def product(scale: float, alpha: float, c: float) -> "WeightSpec":
        if scale <= 0:
            raise DomainError("product scale must be positive")
        if alpha == 0.0 and c == 0.0:
            return WeightSpec.constant(scale)
        if scale == 1.0 and c == 0.0:
            return WeightSpec.power(alpha)
        if scale == 1.0 and alpha == 0.0:
            return WeightSpec.exponential(c)
        return WeightSpec("product", (scale, alpha, c))

    @staticmethod
    def sampled(samples: SampledFunction) -> "WeightSpec":
        return WeightSpec("sampled", (), samples)

    # -- views ---------------------------------------------------------
    def canonical(self) -> tuple:
        """(scale, alpha, c) of a closed-form weight."""
        if self.form == "constant":
            return (self.params[0], 0.0, 0.0)
        if self.form == "power":
            return (1.0, self.params[0], 0.0)
        if self.form == "exponential":
            return (1.0, 0.0, self.params[0])
        if self.form == "product":
            return self.params
        raise DomainError("sampled weight has no closed form")

    def label(self) -> str:
        if self.form == "sampled":
            return f"sampled[n={self.samples.n}]"
        return f"{self.form}({','.join(repr(p) for p in self.params)})"

    def realize(self, x_lo: float, x_hi: float, n: int) -> np.ndarray:
        """Strictly positive node values on the given grid.

        A node sitting exactly at x = 0 would make power forms vanish or
        blow up; that node is evaluated half a cell to the right, which
        keeps the integrable singularity's contribution finite and is
        symmetric under reflection.  Overflow to +inf is allowed here
        (estimators translate it into finite_flag=False); underflow to
        zero violates the positivity invariant and raises.
        """
        x = grid_nodes(x_lo, x_hi, n)
        if self.form == "sampled":
            vals = resample(self.samples, x_lo, x_hi, n).values.real.copy()
        else:
            scale, alpha, c = self.canonical()
            ax = np.abs(x)
            if alpha != 0.0:
                d = (x_hi - x_lo) / (n - 1)
                ax = np.where(ax == 0.0, d / 2.0, ax)
            with np.errstate(over="ignore", under="ignore"):
                vals = scale * ax ** alpha * np.exp(c * x)
        if np.any(np.isnan(vals)) or np.any(vals <= 0.0):
            raise DomainError(f"weight {self.label()} not strictly positive on the window")
        return vals

    def as_sampled(self, x_lo: float, x_hi: float, n: int) -> SampledFunction:
        return SampledFunction(x_lo, x_hi, n, self.realize(x_lo, x_hi, n))

    # -- serialization ---------------------------------------------------
    def to_json(self) -> dict:
        if self.form == "sampled":
            s = self.samples
            return {"form": "sampled", "x_lo": s.x_lo, "x_hi": s.x_hi,
                    "n": s.n, "values": s.values.real.tolist()}
        return {"form": self.form, "params": list(self.params)}

    @staticmethod
    def from_json(obj: dict) -> "WeightSpec":
        form = obj.get("form")
        if form == "sampled":
            sf = SampledFunction(obj["x_lo"], obj["x_hi"], obj["n"],
                                 np.asarray(obj["values"], dtype=float))
            return WeightSpec.sampled(sf)
        params = obj.get("params", [])
        if form == "constant":
            return WeightSpec.constant(*params)
        if form == "power":
            return WeightSpec.power(*params)
        if form == "exponential":
            return WeightSpec.exponential(*params)
        if form == "product":
            return WeightSpec.product(*params)
        raise ConfigError(f"weight.form: unknown tag {form!r}")


def weight_power(w: WeightSpec, e: float) -> WeightSpec:
    """The pointwise power w^e, catalog-closed for closed forms."""
    if w.form == "sampled":
        s = w.samples
        return WeightSpec.sampled(s.with_values(s.values.real ** e))
    scale, alpha, c = w.canonical()
    return WeightSpec.product(scale ** e, alpha * e, c * e)


def dual_weight(w: WeightSpec, p: float) -> WeightSpec:
    """The dual-exponent weight w^{1-p'} pairing A_p^+ with A_{p'}^-."""
    pair = ExponentPair(p)
    return weight_power(w, 1.0 - pair.p_conj)


def factor_weight(w1: WeightSpec, w2: WeightSpec, p: float) -> WeightSpec:
    """The product w1 * w2^{1-p} from the A_1-factorization of A_p^+."""
    ExponentPair(p)
    w2p = weight_power(w2, 1.0 - p)
    if w1.form != "sampled" and w2p.form != "sampled":
        s1, a1, c1 = w1.canonical()
        s2, a2, c2 = w2p.canonical()
        return WeightSpec.product(s1 * s2, a1 + a2, c1 + c2)
    if w1.form == "sampled" and w2p.form == "sampled":
        if not w1.samples.same_grid(w2p.samples):
            raise GridMismatchError("sampled factors live on different grids")
        return WeightSpec.sampled(
            w1.samples.with_values(w1.samples.values.real * w2p.samples.values.real))
    sf = w1.samples if w1.form == "sampled" else w2p.samples
    other = w2p if w1.form == "sampled" else w1
    vals = other.realize(sf.x_lo, sf.x_hi, sf.n)
    return WeightSpec.sampled(sf.with_values(sf.values.real * vals))


def dilate(w: WeightSpec, lam: float) -> WeightSpec:
    """The dilated weight x -> w(lambda x)."""
    if lam <= 0:
        raise DomainError("dilation factor must be positive")
    if w.form == "sampled":
        s = w.samples
        # w(lambda x) sampled at x_i/lambda carries the same values
        return WeightSpec.sampled(SampledFunction(
            s.x_lo / lam, s.x_hi / lam, s.n, s.values.copy()))
    scale, alpha, c = w.canonical()
    return WeightSpec.product(scale * lam ** alpha, alpha, c * lam)


def reflect(w: WeightSpec) -> WeightSpec:
    """The reflected weight x -> w(-x)."""
    if w.form == "sampled":
        return WeightSpec.sampled(w.samples.reflected())
    scale, alpha, c = w.canonical()
    return WeightSpec.product(scale, alpha, -c)


# ---------------------------------------------------------------------------
# search configuration and reports
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TripleSearchConfig:
    """Interval lattice for the sup-searches.

    Anchors are spread uniformly over grid indices; interval lengths are
    log-spaced in [h_min, h_max] and snapped to whole cells.  ``n_grid``
    fixes the quadrature resolution and ``ceiling`` the divergence cap.
    """

    window: tuple
    n_anchor: int = 65
    n_h: int = 16
    h_min: float = 0.05
    h_max: float = 0.0          # 0 -> half the window span
    gamma: float = 0.25
    n_grid: int = 4096
    ceiling: float = DIVERGENCE_CEILING

    def __post_init__(self):
        lo, hi = self.window
        if not lo < hi:
            raise ConfigError(f"window: need lo < hi, got {self.window}")
        object.__setattr__(self, "window", (float(lo), float(hi)))
        if self.h_max == 0.0:
            object.__setattr__(self, "h_max", (hi - lo) / 2.0)
        if not 0 < self.h_min < self.h_max:
            raise ConfigError(f"need 0 < h_min < h_max, got {self.h_min}, {self.h_max}")
        if self.h_max > hi - lo:
            raise ConfigError("h_max exceeds the window span")
        if not 0 < self.gamma <= 0.5:
            raise ConfigError(f"gamma must lie in (0, 1/2], got {self.gamma}")
        if self.n_anchor < 2 or self.n_h < 1 or self.n_grid < 4:
            raise ConfigError("degenerate search lattice")
        if self.ceiling <= 0:
            raise ConfigError("ceiling must be positive")

    @property
    def spacing(self) -> float:
        return (self.window[1] - self.window[0]) / (self.n_grid - 1)

    def scaled(self, lam: float) -> "TripleSearchConfig":
        """The lattice for the dilated weight w(lambda x)."""
        lo, hi = self.window
        return TripleSearchConfig((lo / lam, hi / lam), self.n_anchor, self.n_h,
                                  self.h_min / lam, self.h_max / lam,
                                  self.gamma, self.n_grid, self.ceiling)

    def reflected(self) -> "TripleSearchConfig":
        lo, hi = self.window
        return TripleSearchConfig((-hi, -lo), self.n_anchor, self.n_h,
                                  self.h_min, self.h_max, self.gamma,
                                  self.n_grid, self.ceiling)

    def to_json(self) -> dict:
        return {"window": list(self.window), "n_anchor": self.n_anchor,
                "n_h": self.n_h, "h_min": self.h_min, "h_max": self.h_max,
                "gamma": self.gamma, "n_grid": self.n_grid, "ceiling": self.ceiling}

    @staticmethod
    def from_json(obj: dict) -> "TripleSearchConfig":
        try:
            return TripleSearchConfig(tuple(obj["window"]), **{
                k: obj[k] for k in
                ("n_anchor", "n_h", "h_min", "h_max", "gamma", "n_grid", "ceiling")
                if k in obj})
        except KeyError as exc:
            raise ConfigError(f"search config missing field {exc}") from exc


@dataclass(frozen=True)
class ConstantReport:
    """Result of a sup-search: the estimated constant, the witness
    configuration attaining it, and the resolution used."""

    constant: float
    witness: Optional[dict]
    resolution: TripleSearchConfig
    finite_flag: bool

    def to_json(self) -> dict:
        return {"constant": self.constant, "witness": self.witness,
                "finite_flag": self.finite_flag,
                "resolution": self.resolution.to_json()}

    def to_json_str(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class BumpSearchResult:
    """Outcome of the self-improvement bisection for w^{1+eps}."""

    epsilon: float
    found: bool
    constant_at_epsilon: float


# ---------------------------------------------------------------------------
# lattice helpers
# ---------------------------------------------------------------------------

def _anchor_indices(cfg: TripleSearchConfig) -> np.ndarray:
    """Anchor node indices, uniform in index space (window-independent,
    hence exactly mirror-symmetric)."""
    j = np.arange(cfg.n_anchor, dtype=np.float64)
    idx = np.rint(j * (cfg.n_grid - 1) / (cfg.n_anchor - 1)).astype(np.int64)
    return np.unique(idx)


def _length_cells(cfg: TripleSearchConfig) -> np.ndarray:
    """Interval lengths snapped to whole cells, ascending, deduplicated."""
    d = cfg.spacing
    if cfg.h_min < d:
        raise ConfigError(f"h_min={cfg.h_min} below grid spacing {d}")
    hs = np.geomspace(cfg.h_min, cfg.h_max, cfg.n_h)
    ks = np.unique(np.clip(np.rint(hs / d).astype(np.int64), 1, cfg.n_grid - 1))
    return ks


def _realize_pair(w: WeightSpec, p: float, cfg: TripleSearchConfig):
    """Node values of w and of its dual power w^{1-p'}, plus cell areas."""
    lo, hi = cfg.window
    pair = ExponentPair(p)
    wv = w.realize(lo, hi, cfg.n_grid)
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        sv = wv ** (1.0 - pair.p_conj)
    d = cfg.spacing
    return wv, sv, d


def _cells(vals: np.ndarray, d: float) -> np.ndarray:
    return d * (vals[:-1] + vals[1:]) / 2.0


def _cumcells(vals: np.ndarray, d: float) -> np.ndarray:
    with np.errstate(over="ignore", invalid="ignore"):
        return np.concatenate([[0.0], np.cumsum(_cells(vals, d))])


def _fsum_left(cells_list, anchors, ks) -> np.ndarray:
    """S[i, m] = fsum of cells over (anchor_i - k_m, anchor_i); NaN if it
    leaves the window."""
    out = np.full((len(anchors), len(ks)), np.nan)
    for i, a in enumerate(anchors):
        for m, k in enumerate(ks):
            if a - k >= 0:
                out[i, m] = math.fsum(cells_list[a - k:a])
    return out


def _fsum_right(cells_list, anchors, ks, n_top) -> np.ndarray:
    out = np.full((len(anchors), len(ks)), np.nan)
    for i, a in enumerate(anchors):
        for m, k in enumerate(ks):
            if a + k <= n_top:
                out[i, m] = math.fsum(cells_list[a:a + k])
    return out


def _report(values: np.ndarray, witnesses, cfg: TripleSearchConfig,
            admissible: Optional[np.ndarray] = None,
            at_least_one: str = "search lattice admits no interval") -> ConstantReport:
    """Deterministic argmax report: first maximum in enumeration order
    wins (enumeration is ordered by anchor, then by lengths).

    ``admissible`` marks lattice entries that fit the window; a
    non-finite value at an admissible entry is overflow evidence and
    clears finite_flag instead of raising.
    """
    flat = np.asarray(values, dtype=float).ravel()
    adm = np.ones(flat.shape, dtype=bool) if admissible is None \
        else np.asarray(admissible, dtype=bool).ravel()
    if not np.any(adm):
        raise ConfigError(at_least_one)
    usable = adm & np.isfinite(flat)
    overflowed = bool(np.any(adm & ~np.isfinite(flat)))
    if not np.any(usable):
        return ConstantReport(math.inf, None, cfg, False)
    masked = np.where(usable, flat, -math.inf)
    arg = int(np.argmax(masked))
    best = float(masked[arg])
    flag = bool((not overflowed) and best <= cfg.ceiling)
    return ConstantReport(best, witnesses(arg), cfg, flag)


# ---------------------------------------------------------------------------
# Sawyer-form estimators (pair lattice, cumulative-sum fast path)
# ---------------------------------------------------------------------------

def ap_plus_constant(w: WeightSpec, p: float, cfg: TripleSearchConfig) -> ConstantReport:
    """Sawyer A_p^+ constant estimate:

        sup_{a,h} (1/h int_{a-h}^{a} w) (1/h int_{a}^{a+h} w^{1-p'})^{p-1}

    over the configured (anchor, length) lattice, together with the
    h -> 0+ limit value w(a) w(a)^{-1} = 1 at every anchor.  Including
    that limit keeps the estimate >= 1, matching the class lower bound.
    """
    wv, sv, d = _realize_pair(w, p, cfg)
    anchors = _anchor_indices(cfg)
    ks = _length_cells(cfg)
    n_top = cfg.n_grid - 1
    cw, cs = _cumcells(wv, d), _cumcells(sv, d)

    with np.errstate(invalid="ignore", over="ignore"):
        point = wv[anchors] * sv[anchors] ** (p - 1.0)          # h -> 0+ column
        ia = anchors[:, None]
        kk = ks[None, :]
        ok = (ia - kk >= 0) & (ia + kk <= n_top)
        left = np.where(ok, (cw[np.minimum(ia, n_top)] - cw[np.maximum(ia - kk, 0)]), np.nan)
        right = np.where(ok, (cs[np.minimum(ia + kk, n_top)] - cs[ia]), np.nan)
        vals = (left / (kk * d)) * (right / (kk * d)) ** (p - 1.0)
    table = np.column_stack([point, vals])
    adm = np.column_stack([np.ones(len(anchors), dtype=bool), ok])
    nodes = grid_nodes(*cfg.window, cfg.n_grid)

    def witness(arg):
        i, m = divmod(arg, table.shape[1])
        h = 0.0 if m == 0 else float(ks[m - 1] * d)
        return {"a": float(nodes[anchors[i]]), "h": h}

    return _report(table, witness, cfg, adm)


def ap_minus_constant(w: WeightSpec, p: float, cfg: TripleSearchConfig) -> ConstantReport:
    """Sawyer A_p^- constant estimate; the exact mirror image of
    ap_plus_constant, computed as such."""
    rep = ap_plus_constant(reflect(w), p, cfg.reflected())
    wit = None
    if rep.witness is not None:
        wit = {"a": -rep.witness["a"], "h": rep.witness["h"]}
    return ConstantReport(rep.constant, wit, cfg, rep.finite_flag)


def ap_both_constant(w: WeightSpec, p: float, cfg: TripleSearchConfig) -> ConstantReport:
    """Both-sided Muckenhoupt A_p estimate over the same kind of lattice:
    intervals I = (a, a+h), value (avg_I w)(avg_I w^{1-p'})^{p-1}."""
    wv, sv, d = _realize_pair(w, p, cfg)
    anchors = _anchor_indices(cfg)
    ks = _length_cells(cfg)
    n_top = cfg.n_grid - 1
    cw, cs = _cumcells(wv, d), _cumcells(sv, d)
    with np.errstate(invalid="ignore", over="ignore"):
        point = wv[anchors] * sv[anchors] ** (p - 1.0)
        ia = anchors[:, None]
        kk = ks[None, :]
        ok = ia + kk <= n_top
        hi = np.minimum(ia + kk, n_top)
        left = np.where(ok, cw[hi] - cw[ia], np.nan)
        right = np.where(ok, cs[hi] - cs[ia], np.nan)
        vals = (left / (kk * d)) * (right / (kk * d)) ** (p - 1.0)
    table = np.column_stack([point, vals])
    adm = np.column_stack([np.ones(len(anchors), dtype=bool), ok])
    nodes = grid_nodes(*cfg.window, cfg.n_grid)

    def witness(arg):
        i, m = divmod(arg, table.shape[1])
        h = 0.0 if m == 0 else float(ks[m - 1] * d)
        return {"a": float(nodes[anchors[i]]), "h": h}

    return _report(table, witness, cfg, adm)


# ---------------------------------------------------------------------------
# general three-point form (Remark with a < b < c), fsum path
# ---------------------------------------------------------------------------

def ap_general_constant(w: WeightSpec, p: float, side: str,
                        cfg: TripleSearchConfig) -> ConstantReport:
    """General three-point A_p^{+/-} estimate

        plus:  sup_{a<b<c} (c-a)^{-p} int_a^b w (int_b^c w^{1-p'})^{p-1}
        minus: sup_{a<b<c} (c-a)^{-p} int_b^c w (int_a^b w^{1-p'})^{p-1}

    Triples are anchored at the middle point b with both lengths drawn
    from the same snapped set, so the two sides (and the dual-exponent
    estimator) enumerate identical triples.
    """
    if side not in ("plus", "minus"):
        raise ConfigError(f"side must be plus or minus, got {side!r}")
    wv, sv, d = _realize_pair(w, p, cfg)
    anchors = _anchor_indices(cfg)
    ks = _length_cells(cfg)
    n_top = cfg.n_grid - 1
    cw_list = _cells(wv, d).tolist()
    cs_list = _cells(sv, d).tolist()

    wL = _fsum_left(cw_list, anchors, ks)          # int over (b-k1, b) of w
    wR = _fsum_right(cw_list, anchors, ks, n_top)  # int over (b, b+k2) of w
    sL = _fsum_left(cs_list, anchors, ks)
    sR = _fsum_right(cs_list, anchors, ks, n_top)

    span = (ks[:, None] + ks[None, :]) * d          # (k1, k2) -> c - a
    okL = anchors[:, None] - ks[None, :] >= 0
    okR = anchors[:, None] + ks[None, :] <= n_top
    adm = okL[:, :, None] & okR[:, None, :]
    with np.errstate(invalid="ignore", over="ignore"):
        if side == "plus":
            vals = wL[:, :, None] * sR[:, None, :] ** (p - 1.0) / span[None, :, :] ** p
        else:
            vals = wR[:, None, :] * sL[:, :, None] ** (p - 1.0) / span[None, :, :] ** p
    nodes = grid_nodes(*cfg.window, cfg.n_grid)

    def witness(arg):
        i, rest = divmod(arg, len(ks) * len(ks))
        m1, m2 = divmod(rest, len(ks))
        b = float(nodes[anchors[i]])
        return {"a": b - float(ks[m1] * d), "b": b, "c": b + float(ks[m2] * d)}

    return _report(vals, witness, cfg, adm)


def gamma_fourpoint_constant(w: WeightSpec, p: float, cfg: TripleSearchConfig) -> ConstantReport:
    """Gamma-constrained four-point estimate

        sup (b-a)^{-p} int_a^b w (int_c^d w^{1-p'})^{p-1}

    over a < b < c < d with b-a = d-c = gamma (d-a)."""
    if not 0.0 < cfg.gamma < 0.5:
        raise ConfigError("this form needs gamma in (0, 1/2)")
    wv, sv, d = _realize_pair(w, p, cfg)
    anchors = _anchor_indices(cfg)
    ks = _length_cells(cfg)
    n_top = cfg.n_grid - 1
    cw_list = _cells(wv, d).tolist()
    cs_list = _cells(sv, d).tolist()
    nodes = grid_nodes(*cfg.window, cfg.n_grid)

    vals, tuples, adm = [], [], []
    for a in anchors:
        for M in ks:
            m = int(round(cfg.gamma * M))
            if m < 1 or m >= M - m or a + M > n_top:
                vals.append(np.nan); tuples.append(None); adm.append(False)
                continue
            sw = math.fsum(cw_list[a:a + m])
            ss = math.fsum(cs_list[a + M - m:a + M])
            with np.errstate(over="ignore"):
                vals.append(sw * ss ** (p - 1.0) / (m * d) ** p)
            tuples.append((a, a + m, a + M - m, a + M))
            adm.append(True)

    def witness(arg):
        t = tuples[arg]
        return {"a": float(nodes[t[0]]), "b": float(nodes[t[1]]),
                "c": float(nodes[t[2]]), "d": float(nodes[t[3]])}

    return _report(np.asarray(vals), witness, cfg, np.asarray(adm),
                   "gamma lattice admits no 4-point configuration")


# ---------------------------------------------------------------------------
# A_1 and reverse Holder
# ---------------------------------------------------------------------------

def a1_constant(w: WeightSpec, side: str, cfg: TripleSearchConfig) -> ConstantReport:
    """A_1^{+/-} constant: sup_x M^{-}w(x)/w(x) (plus side) or
    M^{+}w(x)/w(x) (minus side), maximal functions taken on the grid."""
    if side not in ("plus", "minus"):
        raise ConfigError(f"side must be plus or minus, got {side!r}")
    lo, hi = cfg.window
    wf = w.as_sampled(lo, hi, cfg.n_grid)
    m = _ops.m_minus(wf) if side == "plus" else _ops.m_plus(wf)
    ratio = m.values.real / wf.values.real
    nodes = wf.nodes()

    def witness(arg):
        return {"x": float(nodes[arg])}

    return _report(ratio, witness, cfg)


def rh_infty_constant(w: WeightSpec, cfg: TripleSearchConfig) -> ConstantReport:
    """RH_infty^+ constant: sup_x w(x)/m^{+}w(x) with the one-sided
    minimal operator m^{+}."""
    lo, hi = cfg.window
    wf = w.as_sampled(lo, hi, cfg.n_grid)
    m = _ops.m_plus_min(wf).values.real
    if np.any(m == 0.0):
        raise DomainError("m^+ w vanishes at a node")
    ratio = wf.values.real / m
    nodes = wf.nodes()

    def witness(arg):
        return {"x": float(nodes[arg])}

    return _report(ratio, witness, cfg)


_RH_VARIANT_CELLS = {2: (2, 3), 3: (2, 3, 4), 4: (1, 2)}


def rh_plus_constant(w: WeightSpec, r: float, variant: int,
                     cfg: TripleSearchConfig) -> ConstantReport:
    """One-sided reverse Holder RH_r^+ constant, in any of the five
    equivalent forms.  ``variant`` selects the interval pattern:

      1: int_a^b w^r <= C (M(w chi_(a,b))(b))^{r-1} int_a^b w
      2: avg_(a,b) w^r <= C (avg_(b,c) w)^r,  b-a = 2(c-b)
      3: avg_(a,b) w^r <= C (avg_(c,d) w)^r,  b-a = d-b = 2(d-c)
      4: avg_(a,b) w^r <= C (avg_(b,c) w)^r,  b-a = c-b
      5: avg_(a,b) w^r <= C (avg_(c,d) w)^r,  b-a = d-c = gamma (d-a)

    The returned constant is the max over the lattice of LHS/RHS; the
    equivalence constants of the five forms need not agree, only their
    finiteness does.
    """
    if not 1.0 < r < math.inf:
        raise DomainError(f"need 1 < r < inf, got {r}")
    if variant not in (1, 2, 3, 4, 5):
        raise ConfigError(f"variant must be 1..5, got {variant}")
    lo, hi = cfg.window
    wv = w.realize(lo, hi, cfg.n_grid)
    with np.errstate(over="ignore"):
        wr = wv ** r
    d = cfg.spacing
    anchors = _anchor_indices(cfg)
    ks = _length_cells(cfg)
    n_top = cfg.n_grid - 1
    cum_w = _cumcells(wv, d)
    cum_wr = _cumcells(wr, d)
    nodes = grid_nodes(lo, hi, cfg.n_grid)

    vals, tuples, adm = [], [], []

    if variant == 1:
        for a in anchors:
            for k in ks:
                b = a + k
                if b > n_top:
                    vals.append(np.nan); tuples.append(None); adm.append(False)
                    continue
                kk = np.arange(1, k + 1)
                mloc = np.max((cum_w[b] - cum_w[b - kk]) / (kk * d))
                num = cum_wr[b] - cum_wr[a]
                den = mloc ** (r - 1.0) * (cum_w[b] - cum_w[a])
                vals.append(num / den)
                tuples.append({"a": float(nodes[a]), "b": float(nodes[b])})
                adm.append(True)
    elif variant == 5:
        for a in anchors:
            for M in ks:
                m = int(round(cfg.gamma * M))
                if m < 1 or m > M - m or a + M > n_top:
                    vals.append(np.nan); tuples.append(None); adm.append(False)
                    continue
                lhs = (cum_wr[a + m] - cum_wr[a]) / (m * d)
                rhs = (cum_w[a + M] - cum_w[a + M - m]) / (m * d)
                vals.append(lhs / rhs ** r)
                tuples.append({"a": float(nodes[a]), "b": float(nodes[a + m]),
                               "c": float(nodes[a + M - m]), "d": float(nodes[a + M])})
                adm.append(True)
    else:
        pat = _RH_VARIANT_CELLS[variant]
        for a in anchors:
            for k in ks:
                pts = [a + c * k for c in pat]
                if pts[-1] > n_top:
                    vals.append(np.nan); tuples.append(None); adm.append(False)
                    continue
                if variant == 2:       # (a, b=a+2k, c=a+3k): lhs on 2k cells
                    lhs = (cum_wr[a + 2 * k] - cum_wr[a]) / (2 * k * d)
                    rhs = (cum_w[a + 3 * k] - cum_w[a + 2 * k]) / (k * d)
                    tup = {"a": float(nodes[a]), "b": float(nodes[a + 2 * k]),
                           "c": float(nodes[a + 3 * k])}
                elif variant == 3:     # (a, a+2k, a+3k, a+4k)
                    lhs = (cum_wr[a + 2 * k] - cum_wr[a]) / (2 * k * d)
                    rhs = (cum_w[a + 4 * k] - cum_w[a + 3 * k]) / (k * d)
                    tup = {"a": float(nodes[a]), "b": float(nodes[a + 2 * k]),
                           "c": float(nodes[a + 3 * k]), "d": float(nodes[a + 4 * k])}
                else:                  # variant 4: (a, a+k, a+2k)
                    lhs = (cum_wr[a + k] - cum_wr[a]) / (k * d)
                    rhs = (cum_w[a + 2 * k] - cum_w[a + k]) / (k * d)
                    tup = {"a": float(nodes[a]), "b": float(nodes[a + k]),
                           "c": float(nodes[a + 2 * k])}
                with np.errstate(over="ignore"):
                    vals.append(lhs / rhs ** r)
                tuples.append(tup)
                adm.append(True)

    def witness(arg):
        return tuples[arg]

    return _report(np.asarray(vals), witness, cfg, np.asarray(adm),
                   "variant lattice admits no configuration")


# ---------------------------------------------------------------------------
# power bump search
# ---------------------------------------------------------------------------

def power_bump_search(w: WeightSpec, p: float, cfg: TripleSearchConfig,
                      ceiling: float, tol: float = 1e-3) -> BumpSearchResult:
    """Largest eps in (0, 1] with ap_plus_constant(w^{1+eps}) <= ceiling.

    Bisection to ``tol``; a catalog A_p^+ weight always admits some
    eps > 0 (one-sided weights self-improve), so a not-found outcome signals
    either non-membership at this resolution or a too-tight ceiling.
    """
    base = ap_plus_constant(w, p, cfg)
    if not base.finite_flag:
        raise DomainError("power bump requires a finite base A_p^+ estimate")

    def constant_at(eps: float) -> tuple:
        rep = ap_plus_constant(weight_power(w, 1.0 + eps), p, cfg)
        return rep.finite_flag and rep.constant <= ceiling, rep.constant

    ok_hi, c_hi = constant_at(1.0)
    if ok_hi:
        return BumpSearchResult(1.0, True, c_hi)
    ok_lo, c_lo = constant_at(tol)
    if not ok_lo:
        return BumpSearchResult(0.0, False, c_lo)
    lo_e, hi_e, c_at = tol, 1.0, c_lo
    while hi_e - lo_e > tol:
        mid = (lo_e + hi_e) / 2.0
        ok, c = constant_at(mid)
        if ok:
            lo_e, c_at = mid, c
        else:
            hi_e = mid
    return BumpSearchResult(lo_e, True, c_at)
