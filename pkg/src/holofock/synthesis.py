"""Loop search: find a parameter-space loop whose holonomy hits a target gate.

The ansatz parameterises every real coordinate of the model as a truncated
sine series vanishing at t = 0 and t = 1, so every candidate is a closed
loop anchored at the origin.  A derivative-free evolution-strategy search
(covariance matrix adaptation) minimises the phase-invariant gate distance
of the transported holonomy; results are deterministic given the seed.
No optimality claim is attached to the outcome.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .connection import ClosedFormSource
from .gates import cnot_gate, gate_distance, hadamard_conjugation
from .holonomy import Loop, transport
from .operators import MODEL_INFO, ParamPoint

__all__ = ["LoopAnsatz", "SynthesisResult", "synthesize", "cnot_from_x"]


@dataclass(frozen=True)
class LoopAnsatz:
    """Sine-series loop family ``coord_c(t) = sum_k w[c,k] sin(pi k t)``.

    Coefficients are bounded to ``amplitude/harmonics`` each, which keeps
    every coordinate inside the amplitude bound for all t (domain validity
    by construction).
    """

    model: str = "full"
    harmonics: int = 3
    amplitude: float = 1.0
    segments: int = 128

    def __post_init__(self):
        if self.model not in MODEL_INFO:
            raise ValueError(f"unknown model {self.model!r}")
        if self.harmonics < 1:
            raise ValueError("need at least one harmonic")

    @property
    def n_real(self) -> int:
        info = MODEL_INFO[self.model]
        return 2 * len(info.coords) + len(info.phases)

    @property
    def n_params(self) -> int:
        return self.n_real * self.harmonics

    @property
    def coefficient_bound(self) -> float:
        return self.amplitude / self.harmonics

    def loop(self, coefficients: np.ndarray) -> Loop:
        """Materialise the loop as waypoints with per-segment linear pieces."""
        w = np.asarray(coefficients, dtype=float).reshape(self.n_real, self.harmonics)
        ts = np.linspace(0.0, 1.0, self.segments + 1)
        k = np.arange(1, self.harmonics + 1)
        basis = np.sin(np.pi * np.outer(ts, k))      # (S+1, K)
        path = basis @ w.T                            # (S+1, n_real)
        path[0] = 0.0
        path[-1] = 0.0
        waypoints = tuple(
            ParamPoint.from_real_vector(self.model, row) for row in path
        )
        return Loop(self.model, waypoints, "linear", 1)


@dataclass
class SynthesisResult:
    ansatz: LoopAnsatz
    coefficients: np.ndarray
    best_loop: Loop
    best_distance: float
    initial_distance: float
    iterations: int
    history: list[float] = field(default_factory=list)
    meta: dict = field(default_factory=dict)


def _cma_minimise(objective, n, bound, budget, rng, sigma0):
    """Compact covariance-matrix-adaptation minimiser with box clipping.

    Returns (best_x, best_f, history of best-so-far per evaluation, evals).
    """
    lam = 4 + int(3 * np.log(n))
    mu = lam // 2
    weights = np.log(mu + 0.5) - np.log(np.arange(1, mu + 1))
    weights /= weights.sum()
    mu_eff = 1.0 / np.sum(weights**2)
    cc = (4 + mu_eff / n) / (n + 4 + 2 * mu_eff / n)
    cs = (mu_eff + 2) / (n + mu_eff + 5)
    c1 = 2 / ((n + 1.3) ** 2 + mu_eff)
    cmu = min(1 - c1, 2 * (mu_eff - 2 + 1 / mu_eff) / ((n + 2) ** 2 + mu_eff))
    damps = 1 + 2 * max(0.0, np.sqrt((mu_eff - 1) / (n + 1)) - 1) + cs
    chi_n = np.sqrt(n) * (1 - 1 / (4 * n) + 1 / (21 * n * n))

    mean = np.zeros(n)
    sigma = sigma0
    cov = np.eye(n)
    ps = np.zeros(n)
    pc = np.zeros(n)
    evals = 0
    history: list[float] = []
    best_x, best_f = mean.copy(), objective(mean)
    evals += 1
    history.append(best_f)
    if best_f < 1e-10:
        return best_x, best_f, history, evals

    while evals < budget:
        try:
            a_chol = np.linalg.cholesky(cov)
        except np.linalg.LinAlgError:
            cov = cov + 1e-10 * np.eye(n)
            a_chol = np.linalg.cholesky(cov)
        zs, xs, fs = [], [], []
        for _ in range(lam):
            if evals >= budget:
                break
            z = rng.standard_normal(n)
            x = np.clip(mean + sigma * a_chol @ z, -bound, bound)
            f = objective(x)
            evals += 1
            if f < best_f:
                best_f, best_x = f, x.copy()
            history.append(best_f)
            zs.append(z)
            xs.append(x)
            fs.append(f)
        if best_f < 1e-10 or len(fs) < lam:
            break  # solved, or the budget truncated the generation
        order = np.argsort(fs)[:mu]
        xs = np.array(xs)[order]
        zs = np.array(zs)[order]
        new_mean = weights @ xs
        z_mean = weights @ zs
        ps = (1 - cs) * ps + np.sqrt(cs * (2 - cs) * mu_eff) * z_mean
        sigma *= np.exp((cs / damps) * (np.linalg.norm(ps) / chi_n - 1))
        sigma = min(sigma, bound)  # keep proposals meaningful under clipping
        hsig = float(
            np.linalg.norm(ps) / np.sqrt(1 - (1 - cs) ** (2 * evals / lam)) / chi_n
            < 1.4 + 2 / (n + 1)
        )
        y = (new_mean - mean) / sigma
        pc = (1 - cc) * pc + hsig * np.sqrt(cc * (2 - cc) * mu_eff) * y
        arty = (xs - mean) / sigma
        cov = (
            (1 - c1 - cmu) * cov
            + c1 * (np.outer(pc, pc) + (1 - hsig) * cc * (2 - cc) * cov)
            + cmu * arty.T @ np.diag(weights) @ arty
        )
        mean = new_mean
    return best_x, best_f, history, evals


def _multistart_descent(objective, n, bound, budget, rng, target_f=1e-10):
    """Finite-difference-gradient descent from scattered starting points.

    The zero coefficient vector is a critical point of the objective (the
    identity holonomy), so after scoring it for the history baseline the
    starts are drawn at random inside the box.  Returns
    (best_x, best_f, best-so-far history, evals).
    """
    import scipy.optimize

    count = 0
    history: list[float] = []
    best = {"f": np.inf, "x": np.zeros(n)}

    def recorded(x):
        nonlocal count
        f = objective(x)
        count += 1
        if f < best["f"]:
            best["f"], best["x"] = f, np.asarray(x, dtype=float).copy()
        history.append(best["f"])
        return f

    recorded(np.zeros(n))
    while count < budget and best["f"] > target_f:
        remaining = budget - count
        if remaining < 8 * n:
            break  # not enough budget left for a meaningful descent
        x0 = rng.uniform(-0.6 * bound, 0.6 * bound, n)
        # the solver may finish its current finite-difference gradient after
        # hitting maxfun, so reserve one gradient's worth of evaluations
        scipy.optimize.minimize(
            recorded,
            x0,
            method="L-BFGS-B",
            bounds=[(-bound, bound)] * n,
            options={
                "maxfun": min(2000, remaining) - (n + 2),
                "ftol": 1e-14,
                "gtol": 1e-12,
                "eps": 1e-7,
            },
        )
    return best["x"], best["f"], history, count


def synthesize(
    target: np.ndarray,
    ansatz: LoopAnsatz | None = None,
    budget: int = 5000,
    seed: int = 0,
    source=None,
    method: str = "descent",
    sigma0: float | None = None,
) -> SynthesisResult:
    """Search for a loop whose holonomy approximates ``target``.

    ``method='descent'`` (default) runs bounded quasi-Newton descents with
    finite-difference gradients from seeded random starts; ``'cma'`` runs
    the evolution strategy instead.  Deterministic per (seed, budget,
    ansatz, method); transport failures score as infinite.  Returns the
    best loop found — no optimality claim.
    """
    target = np.asarray(target, dtype=complex)
    if target.shape != (4, 4):
        raise ValueError("synthesis targets act on the 4-dimensional fiber")
    if budget < 100:
        raise ValueError("budget below 100 evaluations is not meaningful")
    ansatz = ansatz if ansatz is not None else LoopAnsatz()
    if source is None:
        source = ClosedFormSource(ansatz.model, "validated")
    rng = np.random.default_rng(seed)
    bound = ansatz.coefficient_bound

    def objective(x: np.ndarray) -> float:
        loop = ansatz.loop(x)
        try:
            res = transport(loop, source)
            return gate_distance(res.gamma, target)
        except (ValueError, RuntimeError, np.linalg.LinAlgError):
            return float("inf")

    if method == "descent":
        best_x, best_f, history, evals = _multistart_descent(
            objective, ansatz.n_params, bound, budget, rng
        )
    elif method == "cma":
        s0 = sigma0 if sigma0 is not None else 0.3 * bound
        best_x, best_f, history, evals = _cma_minimise(
            objective, ansatz.n_params, bound, budget, rng, s0
        )
    else:
        raise ValueError(f"unknown method {method!r}")
    best_loop = ansatz.loop(best_x)
    recomputed = gate_distance(transport(best_loop, source).gamma, target)
    return SynthesisResult(
        ansatz=ansatz,
        coefficients=best_x,
        best_loop=best_loop,
        best_distance=recomputed,
        initial_distance=history[0],
        iterations=evals,
        history=history,
        meta={"seed": seed, "budget": budget, "source": repr(source),
              "method": method},
    )


def cnot_from_x(result: SynthesisResult, source=None) -> dict:
    """Conjugate the achieved holonomy by I ⊗ H and report the C-NOT distance.

    Conjugation by a fixed unitary preserves the trace metric, so the
    distance to C-NOT equals the distance to the phase-flip target exactly.
    """
    if source is None:
        source = ClosedFormSource(result.ansatz.model, "validated")
    gamma = transport(result.best_loop, source).gamma
    conjugated = hadamard_conjugation(gamma)
    return {
        "gate": conjugated,
        "distance_to_cnot": gate_distance(conjugated, cnot_gate()),
        "x_distance": result.best_distance,
    }
