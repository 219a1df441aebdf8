"""Seeded search for q-reals whose radius of convergence falls below R*."""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from .cf import ContinuedFraction, format_cf, mobius_cf
from .qdeform import q_real_series, word_matrix
from .radius import R_STAR, Method, radius_exact, radius_numeric, radius_rational

log = logging.getLogger(__name__)

GOLDEN = ContinuedFraction.regular([1], [1])
DEFAULT_WORDS = ("", "T", "S", "TS", "ST", "TT", "STS", "TST", "T-1", "ST-1", "TTS", "STTS")


@dataclass(frozen=True)
class ScanConfig:
    samples: int = 1000
    seed: int = 0
    max_entry: int = 4
    max_period: int = 6
    max_prefix: int = 2
    finite_fraction: float = 0.0
    max_finite_length: int = 40
    numeric_order: int = 200
    tolerance: float = 1e-6
    equality_tolerance: float = 1e-9
    workers: int = 1
    words: tuple[str, ...] = DEFAULT_WORDS


@dataclass
class SampleResult:
    index: int
    cf: str
    method: str
    radius: float | None
    status: str  # ok | violation | unconfirmed | error
    certificate_degree: int | None = None
    error: str | None = None


@dataclass
class ScanReport:
    config: ScanConfig
    results: list[SampleResult]
    probe: list[dict] = field(default_factory=list)

    @property
    def violations(self) -> list[SampleResult]:
        return [r for r in self.results if r.status == "violation"]

    @property
    def unconfirmed(self) -> list[SampleResult]:
        return [r for r in self.results if r.status == "unconfirmed"]

    @property
    def errors(self) -> list[SampleResult]:
        return [r for r in self.results if r.status == "error"]

    @property
    def equality_hits(self) -> list[SampleResult]:
        tol = self.config.equality_tolerance
        return [r for r in self.results if r.radius is not None and abs(r.radius - R_STAR) <= tol]

    @property
    def minimum(self) -> SampleResult | None:
        done = [r for r in self.results if r.radius is not None]
        return min(done, key=lambda r: r.radius) if done else None

    def degree_histogram(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for r in self.results:
            if r.certificate_degree is not None:
                out[r.certificate_degree] = out.get(r.certificate_degree, 0) + 1
        return dict(sorted(out.items()))

    def to_json(self) -> dict:
        m = self.minimum
        cfg = asdict(self.config)
        cfg["words"] = list(self.config.words)
        return {
            "config": cfg,
            "seed": self.config.seed,
            "samples": len(self.results),
            "r_star": R_STAR,
            "min_radius": m.radius if m else None,
            "min_cf": m.cf if m else None,
            "violations": [asdict(r) for r in self.violations],
            "unconfirmed": [asdict(r) for r in self.unconfirmed],
            "errors": [asdict(r) for r in self.errors],
            "equality_hits": [r.cf for r in self.equality_hits],
            "certificate_degrees": self.degree_histogram(),
            "probe": self.probe,
            "results": [asdict(r) for r in self.results],
        }


def sample_cf(config: ScanConfig, index: int) -> ContinuedFraction:
    """The index-th sample; depends only on (seed, index)."""
    rng = np.random.default_rng(np.random.SeedSequence([config.seed, index]))
    hi = config.max_entry + 1
    if rng.random() < config.finite_fraction:
        length = int(rng.integers(2, config.max_finite_length + 1))
        return ContinuedFraction.regular([int(a) for a in rng.integers(1, hi, length)])
    prefix = [int(a) for a in rng.integers(1, hi, int(rng.integers(0, config.max_prefix + 1)))]
    period = [int(a) for a in rng.integers(1, hi, int(rng.integers(1, config.max_period + 1)))]
    return ContinuedFraction.regular(prefix, period)


def evaluate_sample(config: ScanConfig, index: int) -> SampleResult:
    cf = sample_cf(config, index)
    label = format_cf(cf)
    threshold = R_STAR - config.tolerance
    try:
        if cf.is_finite:
            rep = radius_rational(cf)
        else:
            rep = radius_exact(cf, crosscheck=False)
        status = "violation" if rep.value < threshold else "ok"
        deg = rep.certificate.factor.degree if rep.certificate else None
        return SampleResult(index, label, rep.method.value, rep.value, status, deg)
    except Exception as exc:  # noqa: BLE001 - any failure falls back to the numeric estimate
        log.warning("sample %d (%s): exact radius failed: %s", index, label, exc)
        try:
            rep = radius_numeric(q_real_series(cf, config.numeric_order))
            status = "unconfirmed" if rep.value < threshold else "ok"
            return SampleResult(index, label, rep.method.value, rep.value, status, None, str(exc))
        except Exception as exc2:  # noqa: BLE001
            return SampleResult(index, label, "none", None, "error", None, f"{exc}; {exc2}")


def _evaluate_chunk(args) -> list[SampleResult]:
    config, indices = args
    return [evaluate_sample(config, i) for i in indices]


def orbit_probe(words=DEFAULT_WORDS, base: ContinuedFraction = GOLDEN) -> list[dict]:
    """Exact radius of w(x) for modular words w (tokens T, S, T-1 separated by nothing or spaces)."""
    out = []
    for word in words:
        tokens = _tokens(word)
        a, b, c, d = word_matrix(tokens).at_one() if tokens else (1, 0, 0, 1)
        cf = mobius_cf(base, a, b, c, d)
        rep = radius_exact(cf, crosscheck=False)
        out.append({"word": word or "id", "cf": format_cf(cf), "radius": rep.value, "gap": rep.value - R_STAR})
    return out


def _tokens(word: str) -> list[str]:
    out, i = [], 0
    word = word.replace(" ", "")
    while i < len(word):
        if word.startswith("T-1", i):
            out.append("T-1")
            i += 3
        else:
            out.append(word[i])
            i += 1
    return out


def conjecture_scan(config: ScanConfig = ScanConfig()) -> ScanReport:
    """Radius of ``config.samples`` seeded random continued fractions.

    Results are identical for any worker count: each sample draws from its
    own generator seeded with (seed, index).
    """
    indices = list(range(config.samples))
    if config.workers > 1:
        size = max(1, math.ceil(len(indices) / (4 * config.workers)))
        chunks = [(config, indices[i : i + size]) for i in range(0, len(indices), size)]
        with ProcessPoolExecutor(config.workers) as pool:
            results = [r for chunk in pool.map(_evaluate_chunk, chunks) for r in chunk]
    else:
        results = _evaluate_chunk((config, indices))
    results.sort(key=lambda r: r.index)
    probe = orbit_probe(config.words) if config.words else []
    return ScanReport(config, results, probe)


__all__ = ["ScanConfig", "ScanReport", "SampleResult", "conjecture_scan", "orbit_probe", "sample_cf", "Method"]
