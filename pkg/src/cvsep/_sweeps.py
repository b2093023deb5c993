"""Seeded property sweeps shared by the CLI selftest and the test suite.

Sample generation is vectorized (stacked 4x4 congruences and stacked 8x8
eigenvalue calls) so that sweeps over 1e5 matrices stay cheap; the checks
themselves go through the public per-matrix API, since the point of a sweep
is to compare the shipped implementations against each other.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import symplectic
from .covariance import (
    CovarianceMatrix,
    invariants,
    is_physical_invariant,
    is_physical_psd,
    mirror_reflect,
    ppt_invariant,
    ppt_psd,
    ppt_psd_tilde,
    transform,
)
from .matcore import DEFAULT_TOL
from .separability import VerdictKind, decide
from .states import random_physical, thermal, two_mode_squeezed, vacuum
from .symplectic import random_symplectic
from .wigner import sample_moments

#: Samples this close to a decision boundary are excluded from verdict
#: comparisons; floating point cannot hold the two routes to a common sign
#: there, and the package reports such cases as marginal anyway.
MARGINAL_BAND = 1e-8


@dataclass
class SweepReport:
    name: str
    total: int
    compared: int
    failures: int
    worst: float
    notes: list[str] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def line(self) -> str:
        status = "ok" if self.ok else "FAIL"
        return (
            f"{self.name}: {status} ({self.compared}/{self.total} compared, "
            f"{self.failures} failures, worst {self.worst:.3e}, {self.elapsed:.2f}s)"
        )


def _batch_rotations(theta: np.ndarray) -> np.ndarray:
    out = np.empty((theta.size, 2, 2))
    out[:, 0, 0] = out[:, 1, 1] = np.cos(theta)
    out[:, 0, 1] = np.sin(theta)
    out[:, 1, 0] = -out[:, 0, 1]
    return out


def _batch_locals(rng: np.random.Generator, n: int, max_log: float = 1.0) -> np.ndarray:
    out = np.zeros((n, 4, 4))
    for blk in (0, 2):
        u = rng.uniform(-max_log, max_log, n)
        z = np.zeros((n, 2, 2))
        z[:, 0, 0] = np.exp(u)
        z[:, 1, 1] = np.exp(-u)
        r1 = _batch_rotations(rng.uniform(0.0, 2.0 * np.pi, n))
        r2 = _batch_rotations(rng.uniform(0.0, 2.0 * np.pi, n))
        out[:, blk : blk + 2, blk : blk + 2] = r1 @ z @ r2
    return out


def _batch_equal_rotations(theta: np.ndarray) -> np.ndarray:
    out = np.zeros((theta.size, 4, 4))
    c, s = np.cos(theta), np.sin(theta)
    for i in (0, 1):
        out[:, i, i] = out[:, i + 2, i + 2] = c
        out[:, i, i + 2] = s
        out[:, i + 2, i] = -s
    return out


def _batch_symplectics(rng: np.random.Generator, n: int) -> np.ndarray:
    pre = _batch_equal_rotations(rng.uniform(0.0, 2.0 * np.pi, n))
    post = _batch_equal_rotations(rng.uniform(0.0, 2.0 * np.pi, n))
    return pre @ _batch_locals(rng, n) @ post


def _batch_margins(vs: np.ndarray) -> np.ndarray:
    """Smallest eigenvalue of ``V + (i/2) OMEGA`` for a stack of matrices."""
    n = vs.shape[0]
    emb = np.zeros((n, 8, 8))
    emb[:, :4, :4] = vs
    emb[:, 4:, 4:] = vs
    emb[:, :4, 4:] = -symplectic.OMEGA / 2.0
    emb[:, 4:, :4] = symplectic.OMEGA / 2.0
    return np.linalg.eigvalsh(emb)[:, 0]


def uncertainty_cone_samples(n: int, seed) -> np.ndarray:
    """Stack of ``n`` symmetric 4x4 matrices straddling the uncertainty cone.

    Half are physical (symplectic eigenvalues decisively above 1/2 under a
    random symplectic congruence).  A quarter keep the congruence but push at
    least one symplectic eigenvalue decisively below 1/2, which includes the
    treacherous both-below region where the scalar uncertainty residual is
    positive again.  The rest are physical matrices shifted down by
    ``(margin + delta) I``, which lands them decisively outside the cone and
    sometimes outside positive definiteness altogether.
    """
    rng = np.random.default_rng(seed)
    n_phys = n // 2
    n_sub = (n - n_phys) // 2
    n_shift = n - n_phys - n_sub
    nus = np.empty((n, 2))
    nus[:n_phys] = 0.5 + rng.uniform(1e-3, 1.0, (n_phys, 2))
    nus[n_phys : n_phys + n_sub, 0] = rng.uniform(0.05, 0.5 - 1e-3, n_sub)
    nus[n_phys : n_phys + n_sub, 1] = rng.uniform(0.05, 1.5, n_sub)
    swap = rng.random(n_sub) < 0.5
    rows = nus[n_phys : n_phys + n_sub]
    rows[swap] = rows[swap][:, ::-1]
    nus[n_phys + n_sub :] = 0.5 + rng.uniform(1e-3, 1.0, (n_shift, 2))

    diag = np.zeros((n, 4, 4))
    diag[:, 0, 0] = diag[:, 1, 1] = nus[:, 0]
    diag[:, 2, 2] = diag[:, 3, 3] = nus[:, 1]
    s = _batch_symplectics(rng, n)
    vs = s @ diag @ np.swapaxes(s, 1, 2)
    vs = (vs + np.swapaxes(vs, 1, 2)) / 2.0

    tail = vs[n_phys + n_sub :]
    gamma = _batch_margins(tail) + rng.uniform(1e-3, 0.6, n_shift)
    tail -= gamma[:, None, None] * np.eye(4)
    return vs


def physicality_equivalence_sweep(
    n: int, seed, tol: float = DEFAULT_TOL, band: float = MARGINAL_BAND
) -> SweepReport:
    """PSD route vs determinant route of the uncertainty check, sample by sample."""
    t0 = time.perf_counter()
    vs = uncertainty_cone_samples(n, seed)
    compared = failures = 0
    worst = 0.0
    notes: list[str] = []
    for i in range(n):
        v = CovarianceMatrix(vs[i], tol)
        psd = is_physical_psd(v, tol)
        det = is_physical_invariant(v, tol)
        if abs(psd.margin) <= band or abs(det.residual) <= band:
            continue
        compared += 1
        if psd.ok != det.ok:
            failures += 1
            worst = max(worst, abs(det.residual))
            if len(notes) < 5:
                notes.append(
                    f"sample {i}: psd={psd.ok} margin={psd.margin:.3e} "
                    f"det={det.ok} residual={det.residual:.3e}"
                )
    return SweepReport(
        "physicality psd vs determinant",
        n,
        compared,
        failures,
        worst,
        notes,
        time.perf_counter() - t0,
    )


def ppt_equivalence_sweep(
    n: int, seed, tol: float = DEFAULT_TOL, band: float = MARGINAL_BAND
) -> SweepReport:
    """Mirror-congruence and determinant formulations of the PPT test.

    Checks that the two PSD formulations produce the same margin (they are
    congruent by an orthogonal reflection, so their spectra coincide; the
    comparison allows eigensolver noise of 1e-10) and that the determinant
    route reproduces the PSD verdict outside the marginal band.
    """
    t0 = time.perf_counter()
    vs = uncertainty_cone_samples(n, seed)
    compared = failures = 0
    worst = 0.0
    notes: list[str] = []
    for i in range(n):
        v = CovarianceMatrix(vs[i], tol)
        mirror_form = ppt_psd(v, tol)
        tilde_form = ppt_psd_tilde(v, tol)
        gap = abs(mirror_form.margin - tilde_form.margin)
        worst = max(worst, gap)
        if gap > 1e-10 * max(1.0, abs(mirror_form.margin)):
            failures += 1
            if len(notes) < 5:
                notes.append(f"sample {i}: margin gap {gap:.3e}")
            continue
        det = ppt_invariant(v, tol)
        if abs(mirror_form.margin) <= band or abs(det.residual) <= band:
            continue
        compared += 1
        if mirror_form.ok != det.ok:
            failures += 1
            if len(notes) < 5:
                notes.append(
                    f"sample {i}: psd={mirror_form.ok} margin={mirror_form.margin:.3e} "
                    f"det={det.ok} residual={det.residual:.3e}"
                )
    return SweepReport(
        "ppt psd vs determinant",
        n,
        compared,
        failures,
        worst,
        notes,
        time.perf_counter() - t0,
    )


def _rel_gap(x: float, y: float) -> float:
    return abs(x - y) / max(1.0, abs(x), abs(y))


def local_invariance_sweep(n: int, seed, rtol: float = 1e-8) -> SweepReport:
    """I1..I4 and det V before and after random local symplectic congruences.

    The comparison is relative with an absolute floor of 1 (I3 passes
    through zero on generic samples, where a pure relative gap is
    meaningless).  ``invariants`` itself asserts the determinant identity
    at 1e-10 * scale**4 on every call.
    """
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    notes: list[str] = []
    for i in range(n):
        state = random_physical(rng)
        before = invariants(state.cov)
        after = invariants(transform(state.cov, random_symplectic(rng, local_only=True)))
        gap = max(_rel_gap(x, y) for x, y in zip(before, after))
        worst = max(worst, gap)
        if gap > rtol:
            failures += 1
            if len(notes) < 5:
                notes.append(f"pair {i}: relative invariant drift {gap:.3e}")
    return SweepReport(
        "local invariance of I1..I4, det V",
        n,
        n,
        failures,
        worst,
        notes,
        time.perf_counter() - t0,
    )


def closed_form_sweep(tol: float = DEFAULT_TOL) -> SweepReport:
    """Fixed-state checks with independently known outcomes.

    Exercises the mirror constant directly (reflection must flip the sign of
    I3 and break physicality of a strongly squeezed state), so a corrupted
    build -- say a sign flip in the reflection matrix -- fails here even if
    the purely algebraic routes still agree with each other.
    """
    t0 = time.perf_counter()
    checks: list[tuple[str, bool, float]] = []

    vac = vacuum()
    checks.append(("vacuum physical", is_physical_psd(vac.cov, tol).ok, 0.0))
    checks.append(("vacuum ppt", ppt_psd(vac.cov, tol).ok, 0.0))
    checks.append(
        ("vacuum separable", decide(vac.cov, tol, witness_budget=0).kind is VerdictKind.SEPARABLE, 0.0)
    )

    for r in (0.3, 0.9):
        state = two_mode_squeezed(r)
        expected = -0.25 * np.sinh(2.0 * r) ** 2
        res = ppt_invariant(state.cov, tol).residual
        gap = abs(res - expected) / abs(expected)
        checks.append((f"tmsv({r}) ppt residual", gap <= 1e-9, gap))
        phys_res = is_physical_invariant(state.cov, tol).residual
        checks.append((f"tmsv({r}) pure residual", abs(phys_res) <= 1e-9, abs(phys_res)))
        checks.append((f"tmsv({r}) ppt broken", not ppt_psd(state.cov, tol).ok, 0.0))
        mirrored = mirror_reflect(state.cov)
        flip = invariants(mirrored).i3 + invariants(state.cov).i3
        checks.append((f"tmsv({r}) mirror flips I3", abs(flip) <= 1e-12, abs(flip)))
        checks.append(
            (
                f"tmsv({r}) entangled",
                decide(state.cov, tol, witness_budget=0).kind is VerdictKind.ENTANGLED,
                0.0,
            )
        )
        back = mirror_reflect(mirrored)
        checks.append(
            (f"tmsv({r}) mirror involution", np.array_equal(back.matrix, state.cov.matrix), 0.0)
        )

    th = thermal(0.4, 1.1)
    checks.append(("thermal separable", decide(th.cov, tol, witness_budget=0).kind is VerdictKind.SEPARABLE, 0.0))

    failures = sum(1 for _, ok, _ in checks if not ok)
    worst = max(gap for _, _, gap in checks)
    notes = [name for name, ok, _ in checks if not ok]
    return SweepReport(
        "closed-form catalog checks",
        len(checks),
        len(checks),
        failures,
        worst,
        notes,
        time.perf_counter() - t0,
    )


def moment_sweep(n: int, seed, nsig: float = 5.0) -> SweepReport:
    """Monte-Carlo second moments against the exact covariance entries."""
    t0 = time.perf_counter()
    targets = [("vacuum", vacuum()), ("tmsv(0.5)", two_mode_squeezed(0.5))]
    failures = 0
    worst = 0.0
    notes: list[str] = []
    rng = np.random.default_rng(seed)
    for name, state in targets:
        est = sample_moments(state, n, rng)
        pulls = np.abs(est.empirical_cov - state.cov.matrix) / np.maximum(est.stderr, 1e-15)
        pull = float(pulls.max())
        worst = max(worst, pull)
        if pull > nsig:
            failures += 1
            notes.append(f"{name}: worst pull {pull:.2f} sigma")
    return SweepReport(
        "monte-carlo moments",
        len(targets),
        len(targets),
        failures,
        worst,
        notes,
        time.perf_counter() - t0,
    )


def run_selftest(samples: int, seed, tol: float = DEFAULT_TOL) -> list[SweepReport]:
    """The suites behind ``cvsep selftest``, sized by ``samples``."""
    rng = np.random.default_rng(seed)
    seeds = rng.integers(0, 2**63, size=4)
    return [
        closed_form_sweep(tol),
        physicality_equivalence_sweep(samples, seeds[0], tol),
        ppt_equivalence_sweep(samples, seeds[1], tol),
        local_invariance_sweep(max(10, samples // 10), seeds[2]),
        moment_sweep(max(1000, samples), seeds[3]),
    ]
