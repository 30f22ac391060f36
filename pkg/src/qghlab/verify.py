"""Randomized property suites over every module, used by ``qghlab verify``.

Each suite draws its inputs from its own Philox stream derived from the
seed, counts how many cases it checked and keeps the first counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import balancing, bounds, gh_metric, lp_core, sampling

FAULTS = ("clarkson",)


@dataclass
class SuiteResult:
    name: str
    checked: int = 0
    failed: int = 0
    counterexample: str = ""

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def record(self, ok: bool, describe) -> None:
        self.checked += 1
        if not ok:
            self.failed += 1
            if not self.counterexample:
                self.counterexample = describe()


def _fmt(**values) -> str:
    parts = []
    for k, v in values.items():
        if isinstance(v, np.ndarray):
            v = v.tolist()
        parts.append(f"{k}={v!r}")
    return " ".join(parts)


def suite_estimates(rng, scale):
    res = SuiteResult("estimates")
    grid = np.append(np.arange(2000) * 1e-3, 2.0)
    for p in [1.01] + [round(1 + k / 10, 10) for k in range(1, 11)]:
        vals = lp_core.f_gap(grid, p)
        k = int(np.argmax(vals))
        res.record(k == grid.size - 1 and abs(vals[k] - (2**p - 2)) <= 1e-9,
                   lambda: _fmt(p=p, argmax=float(grid[k]), value=float(vals[k])))
    for _ in range(scale):
        p = rng.uniform(1, 3)
        t = rng.uniform(0, 5)
        s = rng.uniform(0, t)
        low = (t - s) ** p + s**p
        ok = low <= t**p + 1e-12 and t**p <= 2 ** (p - 1) * low + 1e-12
        res.record(ok, lambda: _fmt(p=p, t=t, s=s))
    return res


def suite_clarkson(rng, scale, fault=None):
    res = SuiteResult("clarkson")
    for p in (1.1, 1.5, 1.9):
        q = lp_core.conjugate_exponent(p)
        for _ in range(scale):
            n = int(rng.integers(1, 33))
            x = rng.normal(size=n) * rng.exponential()
            y = rng.normal(size=n) * rng.exponential()
            slack = lp_core.clarkson_slack(x, y, p)
            if fault == "clarkson":
                slack -= 4 * (lp_core.p_norm_power(x, p) + lp_core.p_norm_power(y, p)) ** (q / p)
            res.record(slack >= -1e-10, lambda: _fmt(p=p, x=x, y=y, slack=slack))
    for _ in range(scale // 10 + 1):
        x, y = rng.normal(size=(2, 8))
        slack = lp_core.clarkson_slack(x, y, 2.0)
        res.record(abs(slack) <= 1e-10, lambda: _fmt(p=2.0, x=x, y=y, slack=slack))
    return res


def suite_mazur(rng, scale):
    res = SuiteResult("mazur")
    for _ in range(scale):
        p = rng.uniform(1, 2)
        n = int(rng.integers(1, 17))
        x = sampling.ball_array(lp_core.LpSpace(n, p), 1, rng)[0]
        y = lp_core.mazur_array(x, p)
        back = lp_core.mazur_inverse_array(y, p)
        ok = (np.max(np.abs(back - x)) <= 1e-12
              and abs(lp_core.p_norm(y, 1) - lp_core.p_norm_power(x, p)) <= 1e-12)
        res.record(ok, lambda: _fmt(p=p, x=x))
        a, b = rng.uniform(-1, 1, 2)
        res.record(lp_core.scalar_gap_bound_check(a, b, p), lambda: _fmt(p=p, a=a, b=b))
    return res


def suite_balancing(rng, scale):
    res = SuiteResult("balancing")
    for p in (1.1, 1.5, 1.9):
        for _ in range(max(1, scale // 10)):
            n = int(rng.integers(1, 65))
            N = int(rng.integers(1, 33))
            space = lp_core.LpSpace(N, p)
            xs = np.vstack([sampling.ball_array(space, n - n // 2, rng),
                            sampling.sphere_array(space, n // 2, rng)])
            out = balancing.balance_signs(xs, p)
            steps = np.arange(1, n + 1) ** (1 / p)
            ok = (bool(np.all(out.partial_norms <= steps + 1e-9))
                  and balancing.balance_certificate_check(xs, out.signs, p))
            res.record(ok, lambda: _fmt(p=p, points=xs, signs=out.signs))
    return res


def suite_metric(rng, scale):
    res = SuiteResult("metric")
    for _ in range(max(1, scale // 20)):
        p = rng.uniform(1, 2)
        space = lp_core.LpSpace(int(rng.integers(1, 9)), p)
        xs = sampling.ball_array(space, int(rng.integers(2, 30)), rng)
        try:
            M = gh_metric.metric_from_points(list(xs), space)
            ok = True
        except ValueError:
            ok = False
        res.record(ok, lambda: _fmt(p=p, points=xs))
        if ok:
            S, T, U = (rng.choice(M.size, size=int(rng.integers(1, M.size + 1)), replace=False)
                       for _ in range(3))
            h = gh_metric.hausdorff_distance
            ok = (h(S, T, M) == h(T, S, M)
                  and h(S, U, M) <= h(S, T, M) + h(T, U, M) + 1e-12)
            res.record(ok, lambda: _fmt(p=p, S=S, T=T, U=U))
    return res


def _random_space(rng, size):
    pts = rng.uniform(-1, 1, size=(size, 2))
    return gh_metric.metric_from_points(list(pts), lp_core.LpSpace(2, rng.uniform(1, 2)))


def _random_correspondence(rng, m, n):
    pairs = {(i, int(rng.integers(n))) for i in range(m)}
    pairs |= {(int(rng.integers(m)), j) for j in range(n)}
    extra = int(rng.integers(0, m * n))
    pairs |= {(int(rng.integers(m)), int(rng.integers(n))) for _ in range(extra)}
    return gh_metric.Correspondence(pairs)


def suite_gh(rng, scale):
    res = SuiteResult("gh_oracle")
    for _ in range(max(1, scale // 50)):
        A = _random_space(rng, int(rng.integers(1, 6)))
        B = _random_space(rng, int(rng.integers(1, 6)))
        exact = gh_metric.brute_force_gh(A, B)
        res.record(exact == gh_metric.brute_force_gh(B, A) and gh_metric.brute_force_gh(A, A) == 0,
                   lambda: _fmt(A=A.dist, B=B.dist))
        for _ in range(10):
            R = _random_correspondence(rng, A.size, B.size)
            upper = gh_metric.gh_upper_from_correspondence(R, A, B)
            res.record(exact <= upper + 1e-12, lambda: _fmt(A=A.dist, B=B.dist, R=sorted(R.pairs)))
    for p in (1.1, 1.5, 2.0):
        rep = gh_metric.mazur_correspondence_experiment(p, 4, max(4, scale // 5), int(rng.integers(2**32)))
        res.record(rep.within_bound, lambda: _fmt(report=rep))
    return res


def suite_bounds(rng, scale):
    res = SuiteResult("bounds")
    for _ in range(scale):
        p = rng.uniform(1.0001, 2)
        N = int(rng.integers(1, 10**6))
        delta = rng.uniform(0, 1)
        try:
            c = bounds.certificate_chain_check(p, N, delta)
            ok = c.holds == (delta >= c.lower_bound) or abs(delta - c.lower_bound) <= 1e-12
        except ArithmeticError:
            ok = False
        res.record(ok, lambda: _fmt(p=p, N=N, delta=delta))
    for _ in range(max(1, scale // 100)):
        p = rng.uniform(1.05, 2)
        t = rng.uniform(0.05, 0.45)
        N = bounds.min_dimension_for_separation(p, t)
        ok = bounds.qgh_lower_bound(p, N) >= 0.5 - t
        res.record(ok, lambda: _fmt(p=p, threshold=t, N=N))
    for _ in range(max(1, scale // 100)):
        N = int(rng.integers(1, 9))
        p = rng.uniform(1, 3)
        perm = rng.permutation(N)
        flips = rng.choice([-1.0, 1.0], N)
        shift = rng.normal(size=N)
        ball_map = lambda v: flips * np.asarray(v)[perm] + shift
        x = sampling.ball_array(lp_core.LpSpace(N, p), 1, rng)[0]
        err = np.max(np.abs(bounds.homogeneous_extension(ball_map, x, p) - flips * x[perm]))
        res.record(err <= 1e-9, lambda: _fmt(p=p, perm=perm, flips=flips, x=x))
    return res


SUITES = {
    "estimates": suite_estimates,
    "clarkson": suite_clarkson,
    "mazur": suite_mazur,
    "balancing": suite_balancing,
    "metric": suite_metric,
    "gh_oracle": suite_gh,
    "bounds": suite_bounds,
}


def run_all(seed: int = 42, scale: int = 1000, fault: str | None = None) -> list[SuiteResult]:
    """Run every suite; `fault` deliberately breaks one check to test the harness."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}")
    seeds = np.random.SeedSequence(int(seed)).spawn(len(SUITES))
    results = []
    for (name, suite), ss in zip(SUITES.items(), seeds):
        rng = np.random.Generator(np.random.Philox(ss))
        if name == "clarkson":
            results.append(suite(rng, scale, fault=fault))
        else:
            results.append(suite(rng, scale))
    return results
