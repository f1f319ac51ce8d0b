"""Geodesic vectors of left-invariant Lorentzian metrics on 3D Lie groups.

A vector X = X_m + X_h (X_h a combination of isotropy maps A_j) is a geodesic
vector when, for i = 1, 2, 3,

    r_i = <[X_m, e_i] + A(e_i), X_m> - k <X_m, e_i> = 0,    A = sum_j t_j A_j.

For non-null X_m the constant k is necessarily 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .algebra import METRIC, SIGNS, DEFAULT_TOL, StructureConstants, causal_character
from .connection import levi_civita
from .families import AlgebraInstance

NEWTON_ITERS = 50
NEWTON_DAMPING = 0.5
JITTER = 1e-2
CLUSTER_RADIUS = 1e-3
SLOW_STOP = 1e-8
CROWD_LEVEL = 1e-3
CROWD_AFTER = 2


def _constants(obj) -> StructureConstants:
    return obj.constants if isinstance(obj, AlgebraInstance) else obj


def _iso_mats(l_basis) -> np.ndarray:
    maps = list(l_basis.basis if hasattr(l_basis, "basis") else (l_basis or ()))
    if not maps:
        return np.zeros((0, 3, 3))
    return np.array([m.matrix().astype(float) for m in maps])


def geodesic_lhs(c: StructureConstants, X: np.ndarray) -> np.ndarray:
    """v_i = <[X, e_i], X> for a batch X of shape (n, 3)."""
    B = (X @ c.c.reshape(3, 9)).reshape(-1, 3, 3)  # component k of [X, e_j]
    return np.einsum("njk,nk->nj", B, X * SIGNS)


def geodesic_residual(instance, l_basis, xm, k=0.0, isotropy_coeffs=()) -> np.ndarray:
    """The three residuals r_1, r_2, r_3 of the geodesic-vector condition."""
    c = _constants(instance)
    x = np.asarray(xm, dtype=float)
    r = geodesic_lhs(c, x[None])[0] - k * (METRIC @ x)
    mats = _iso_mats(l_basis)
    for t, A in zip(np.atleast_1d(np.asarray(isotropy_coeffs, dtype=float)), mats):
        r = r + t * (A.T @ (METRIC @ x))  # <A e_i, x>
    return r


@dataclass(frozen=True)
class GeodesicVector:
    xm: tuple
    k: float
    isotropy_part: tuple = ()
    causal: str = ""
    residual: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.xm, dtype=float)

    def as_dict(self) -> dict:
        return {
            "xm": list(self.xm),
            "k": self.k,
            "isotropy_part": list(self.isotropy_part),
            "causal": self.causal,
        }


def canonical_direction(x, tol: float = 1e-9) -> np.ndarray:
    """Unit Euclidean norm with the first non-negligible component positive."""
    v = np.asarray(x, dtype=float)
    v = v / np.linalg.norm(v)
    for comp in v:
        if abs(comp) > tol:
            return v if comp > 0 else -v
    return v


def solve_completion(c: StructureConstants, mats: np.ndarray, x: np.ndarray, null: bool):
    """Least-squares (k, t) for fixed unit x; returns (k, t, residual)."""
    v = geodesic_lhs(c, x[None])[0]
    gx = METRIC @ x
    cols = [A.T @ gx for A in mats]
    if null:
        cols = [-gx] + cols
    if cols:
        M = np.array(cols).T
        sol, *_ = np.linalg.lstsq(M, -v, rcond=None)
        res = v + M @ sol
    else:
        sol, res = np.zeros(0), v
    k = float(sol[0]) if null else 0.0
    t = sol[1:] if null else sol
    return k, t, float(np.max(np.abs(res)))


def is_geodesic_vector(instance, l_basis, xm, tol: float = DEFAULT_TOL):
    """Return (k, isotropy coefficients) if xm extends to a geodesic vector.

    The test runs on the unit direction of xm; k and the coefficients are
    rescaled back to xm (both scale linearly with xm).
    """
    c = _constants(instance)
    x = np.asarray(xm, dtype=float)
    n = float(np.linalg.norm(x))
    if n == 0:
        raise ValueError("xm must be nonzero")
    u = x / n
    mats = _iso_mats(l_basis)
    null = causal_character(u, tol) == "null"
    k, t, res = solve_completion(c, mats, u, null=False)
    if res > tol and null:
        k, t, res = solve_completion(c, mats, u, null=True)
    if res > tol:
        return None
    return k * n, tuple(float(v) * n for v in t)


def make_geodesic_vector(instance, l_basis, xm, tol: float = DEFAULT_TOL) -> GeodesicVector | None:
    sol = is_geodesic_vector(instance, l_basis, xm, tol)
    if sol is None:
        return None
    k, t = sol
    res = geodesic_residual(instance, l_basis, xm, k, t)
    return GeodesicVector(
        tuple(float(v) for v in xm), float(k), tuple(t), causal_character(np.asarray(xm) / np.linalg.norm(xm), tol),
        float(np.max(np.abs(res))),
    )


def covariant_self_derivative(instance, x) -> np.ndarray:
    """nabla_X X for a left-invariant field X."""
    gamma = levi_civita(_constants(instance))
    x = np.asarray(x, dtype=float)
    return np.einsum("ijk,i,j->k", gamma, x, x)


def nabla_parallel_check(instance, gv: GeodesicVector, tol: float = DEFAULT_TOL) -> bool:
    """|nabla_X X + k X| <= tol |X|^2, valid when the isotropy part is zero."""
    if any(abs(t) > 0 for t in gv.isotropy_part):
        raise ValueError("nabla check needs a zero isotropy part")
    x = gv.vector
    dev = covariant_self_derivative(instance, x) + gv.k * x
    return float(np.linalg.norm(dev)) <= tol * float(x @ x)


def nabla_parallel_k(instance, x) -> float:
    """Least-squares k in nabla_X X = -k X."""
    x = np.asarray(x, dtype=float)
    return -float(covariant_self_derivative(instance, x) @ x) / float(x @ x)


# -- numeric search -----------------------------------------------------------


def fibonacci_sphere(n: int) -> np.ndarray:
    i = np.arange(n) + 0.5
    z = 1 - 2 * i / n
    r = np.sqrt(np.maximum(0.0, 1 - z * z))
    phi = math.pi * (3 - math.sqrt(5)) * i
    return np.stack([r * np.cos(phi), r * np.sin(phi), z], axis=1)


def _system(c, mats, X, k, T):
    v = geodesic_lhs(c, X)
    gx = X @ METRIC
    r = v - k[:, None] * gx
    if len(mats):
        r = r + np.einsum("nj,jmi,nm->ni", T, mats, gx)
    norm = np.sum(X * X, axis=1) - 1.0
    return np.concatenate([r, norm[:, None]], axis=1)


def _jacobian(c, mats, X, k, T):
    n = len(X)
    m = len(mats)
    B = (X @ c.c.reshape(3, 9)).reshape(-1, 3, 3)
    cg = c.c * SIGNS  # c[m, j, k] <e_k, e_k>
    # dV[n, j, m] = sum_k cg[m, j, k] X[n, k] + B[n, j, m] <e_m, e_m>
    dV = (X @ cg.transpose(2, 1, 0).reshape(3, 9)).reshape(-1, 3, 3) + B * SIGNS
    J = np.zeros((n, 4, 4 + m))
    J[:, :3, :3] = dV - k[:, None, None] * METRIC[None]
    if m:
        AG = np.einsum("jmi,ml->jil", mats, METRIC)  # d<A_j e_i, X>/dX_l
        J[:, :3, :3] += np.einsum("nj,jil->nil", T, AG)
        J[:, :3, 4:] = np.einsum("jil,nl->nij", AG, X)
    J[:, :3, 3] = -(X @ METRIC)
    J[:, 3, :3] = 2 * X
    return J


def _solve_spd4(H: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Batched solve of 4 x 4 symmetric positive definite systems.

    An unrolled Cholesky factorization on contiguous component arrays; much
    faster than a batched LAPACK call for tiny matrices.
    """
    h = H.reshape(len(H), 16).T
    b0, b1, b2, b3 = b.T
    tiny = 1e-300
    l00 = np.sqrt(np.maximum(h[0], tiny))
    l10, l20, l30 = h[4] / l00, h[8] / l00, h[12] / l00
    l11 = np.sqrt(np.maximum(h[5] - l10 * l10, tiny))
    l21 = (h[9] - l20 * l10) / l11
    l31 = (h[13] - l30 * l10) / l11
    l22 = np.sqrt(np.maximum(h[10] - l20 * l20 - l21 * l21, tiny))
    l32 = (h[14] - l30 * l20 - l31 * l21) / l22
    l33 = np.sqrt(np.maximum(h[15] - l30 * l30 - l31 * l31 - l32 * l32, tiny))
    y0 = b0 / l00
    y1 = (b1 - l10 * y0) / l11
    y2 = (b2 - l20 * y0 - l21 * y1) / l22
    y3 = (b3 - l30 * y0 - l31 * y1 - l32 * y2) / l33
    x3 = y3 / l33
    x2 = (y2 - l32 * x3) / l22
    x1 = (y1 - l21 * x2 - l31 * x3) / l11
    x0 = (y0 - l10 * x1 - l20 * x2 - l30 * x3) / l00
    return np.stack([x0, x1, x2, x3], axis=1)


def _lsq(M: np.ndarray, v: np.ndarray) -> np.ndarray:
    """Batched least squares argmin |M s + v|.

    One or two columns use ridge-regularized normal equations (much faster
    than a batched SVD); wider systems fall back to the pseudo-inverse.
    """
    p = M.shape[2]
    if p == 0:
        return np.zeros((len(M), 0))
    if p > 2:
        return -np.einsum("nij,nj->ni", np.linalg.pinv(M), v)
    MtM = np.transpose(M, (0, 2, 1)) @ M
    ridge = 1e-14 * (np.trace(MtM, axis1=1, axis2=2) / p) + 1e-300
    MtM = MtM + ridge[:, None, None] * np.eye(p)
    rhs = -np.einsum("nij,ni->nj", M, v)
    if p == 1:
        return rhs / MtM[:, 0]
    return np.linalg.solve(MtM, rhs[:, :, None])[:, :, 0]


def _seed_completion(c, mats, X):
    """Least-squares (k, t) for fixed directions: the starting guess."""
    v = geodesic_lhs(c, X)
    gx = X @ METRIC
    M = np.concatenate([-gx[:, :, None], np.einsum("jmi,nm->nij", mats, gx)], axis=2)
    sol = _lsq(M, v)
    return sol[:, 0], sol[:, 1:]


def refine(c: StructureConstants, mats: np.ndarray, X0: np.ndarray, iters: int = NEWTON_ITERS):
    """Damped Gauss-Newton on (x, k, t) from a batch of starting directions.

    Steps are halved (factor NEWTON_DAMPING, at most 8 times) until the
    residual norm decreases; the minimum-norm step handles solution curves.
    """
    n = len(X0)
    X = np.array(X0, dtype=float)
    k, T = _seed_completion(c, mats, X)
    f = _system(c, mats, X, k, T)
    fn = np.linalg.norm(f, axis=1)
    scale = max(1.0, float(np.max(np.abs(c.c))))
    active = np.ones(n, dtype=bool)
    for it in range(iters):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        before = fn[idx].copy()
        J = _jacobian(c, mats, X[idx], k[idx], T[idx])
        JT = np.transpose(J, (0, 2, 1))
        # minimum-norm Gauss-Newton step through the 4 x 4 system J J^T
        H = J @ JT + (1e-14 * scale * scale) * np.eye(4)
        step = -np.einsum("nij,nj->ni", JT, _solve_spd4(H, f[idx]))
        lam = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        for _ in range(8):
            if not pending.any():
                break
            p = idx[pending]
            s = step[pending] * lam[pending, None]
            Xn, kn, Tn = X[p] + s[:, :3], k[p] + s[:, 3], T[p] + s[:, 4:]
            fnew = _system(c, mats, Xn, kn, Tn)
            nn = np.linalg.norm(fnew, axis=1)
            ok = (nn < fn[p]) | (nn == 0)
            acc = p[ok]
            X[acc], k[acc], T[acc], f[acc], fn[acc] = Xn[ok], kn[ok], Tn[ok], fnew[ok], nn[ok]
            sub = np.nonzero(pending)[0]
            pending[sub[ok]] = False
            lam[pending] *= NEWTON_DAMPING
        # stalled, converged or linearly converging points stop here; the
        # last group sits near a singular root and is left to deflation
        active[idx[pending]] = False
        active &= fn > 1e-15 * scale
        slow = (fn[idx] < SLOW_STOP * scale) & (fn[idx] > 0.25 * before)
        active[idx[slow]] = False
        # points crowding towards the same root: keep the best one per cell
        level = np.inf if it >= CROWD_AFTER else CROWD_LEVEL * scale
        near = np.nonzero(active & (fn < level))[0]
        if len(near) > 64:
            near = near[np.argsort(fn[near], kind="stable")]
            U = X[near] / np.linalg.norm(X[near], axis=1)[:, None]
            cells = np.round(_canonical_rows(U, 1e-3), 3) + 0.0
            _, first = np.unique(cells, axis=0, return_index=True)
            keep = np.zeros(len(near), dtype=bool)
            keep[first] = True
            active[near[~keep]] = False
    return X, k, T


def _jacobian_slopes(c, mats, n: int):
    """(J(0), S) with J(z) = J(0) + sum_p z_p S[p]; the Jacobian is affine in z."""
    E = np.vstack([np.zeros(n), np.eye(n)])
    Js = _jacobian(c, mats, E[:, :3], E[:, 3], E[:, 4:])
    return Js[0], Js[1:] - Js[0][None]


def deflate(c: StructureConstants, mats: np.ndarray, Z: np.ndarray, rank: int, seed: int = 0):
    """Polish a batch of near-singular roots of the refinement system.

    Appends J(z) B lam = 0, h . lam = 1 with a random B of rank+1 columns,
    which turns a singular isolated root into a regular one. Returns the
    polished points and a mask of those that reached a zero of the
    augmented system.
    """
    rng = np.random.default_rng(seed)
    N, n = Z.shape
    q = rank + 1
    B = rng.standard_normal((n, q))
    h = rng.standard_normal(q)
    J0, S = _jacobian_slopes(c, mats, n)
    rows = J0.shape[0]

    def jac(z):
        return J0[None] + np.einsum("np,pij->nij", z, S)

    def G(z, lam):
        f = _system(c, mats, z[:, :3], z[:, 3], z[:, 4:])
        return np.concatenate([f, np.einsum("nij,jq,nq->ni", jac(z), B, lam), (lam @ h - 1.0)[:, None]], axis=1)

    J = jac(Z)
    A = np.concatenate([J @ B, np.broadcast_to(h, (N, 1, q))], axis=1)
    rhs = np.zeros(rows + 1)
    rhs[-1] = 1.0
    lam = np.einsum("nij,j->ni", np.linalg.pinv(A), rhs)
    z = Z.astype(float).copy()
    g = G(z, lam)
    gn = np.linalg.norm(g, axis=1)
    scale = max(1.0, float(np.max(np.abs(c.c))))
    active = np.ones(N, dtype=bool)
    for it in range(NEWTON_ITERS):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        before = gn[idx].copy()
        Jz = jac(z[idx])
        mid = np.einsum("pij,nj->nip", S, lam[idx] @ B.T)
        D = np.zeros((len(idx), 2 * rows + 1, n + q))
        D[:, :rows, :n] = Jz
        D[:, rows:2 * rows, :n] = mid
        D[:, rows:2 * rows, n:] = Jz @ B
        D[:, -1, n:] = h
        step = np.einsum("nij,nj->ni", np.linalg.pinv(D), g[idx])
        t = np.ones(len(idx))
        pending = np.ones(len(idx), dtype=bool)
        for _ in range(8):
            if not pending.any():
                break
            p = idx[pending]
            sp = step[pending] * t[pending, None]
            zn, ln = z[p] - sp[:, :n], lam[p] - sp[:, n:]
            gnew = G(zn, ln)
            nn = np.linalg.norm(gnew, axis=1)
            ok = nn < gn[p]
            acc = p[ok]
            z[acc], lam[acc], g[acc], gn[acc] = zn[ok], ln[ok], gnew[ok], nn[ok]
            sub = np.nonzero(pending)[0]
            pending[sub[ok]] = False
            t[pending] *= NEWTON_DAMPING
        active[idx[pending]] = False
        if it >= 6:
            # a regular root converges quadratically by now; give up on the rest
            active[idx[gn[idx] > 0.5 * before]] = False
        active &= gn > 1e-15 * scale
    done = gn <= 1e-12 * scale * (1.0 + np.linalg.norm(lam, axis=1))
    return z, done


def _canonical_rows(U: np.ndarray, tol: float) -> np.ndarray:
    """Row-wise canonical_direction for unit rows."""
    first = np.argmax(np.abs(U) > tol, axis=1)
    sign = np.sign(U[np.arange(len(U)), first])
    return U * np.where(sign == 0, 1.0, sign)[:, None]


def _projective_gap(U: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Distance between unit directions up to sign."""
    return np.sqrt(np.maximum(0.0, 2.0 - 2.0 * np.abs(U @ u)))


def _polish_stalled(c, mats, X, k, T, gray=(1e-13, 1e-3), rounds: int = 4):
    """Replace poorly converged near-roots by deflation-polished roots.

    A refined point is a candidate when its Jacobian has a singular value in
    the gray band and its residual is small. One representative per 1e-3
    cell is polished (batched); candidates within CLUSTER_RADIUS of a
    polished root join it.
    """
    scale = max(1.0, float(np.max(np.abs(c.c))))
    f = np.linalg.norm(_system(c, mats, X, k, T), axis=1)
    small = np.nonzero(f <= 1e-6 * scale)[0]
    J = _jacobian(c, mats, X[small], k[small], T[small])
    # det(J J^T) / |J|_F^8 bounds (s_min / s_max)^2 from below: a cheap screen
    # that certifies most regular roots without an SVD
    G = J @ np.transpose(J, (0, 2, 1))
    fro = np.einsum("nij,nij->n", J, J)
    regular = np.abs(np.linalg.det(G)) >= (gray[1] ** 2) * fro ** 4
    ranks = np.zeros(len(X), dtype=int)
    ranks[small[regular]] = 4
    todo = np.zeros(len(X), dtype=bool)
    check = small[~regular]
    if len(check):
        s = np.linalg.svd(J[~regular], compute_uv=False)
        rel = s / s[:, :1]
        ranks[check] = np.sum(rel >= gray[1], axis=1)
        todo[check] = np.any((rel > gray[0]) & (rel < gray[1]), axis=1)
    X = X.copy()
    U = X / np.linalg.norm(X, axis=1)[:, None]
    for _ in range(rounds):
        idx = np.nonzero(todo)[0]
        if len(idx) == 0:
            break
        idx = idx[np.argsort(f[idx], kind="stable")]
        cells = np.round(_canonical_rows(U[idx], 1e-3), 3) + 0.0
        _, first = np.unique(cells, axis=0, return_index=True)
        reps = idx[np.sort(first)]
        todo[reps] = False
        polished = np.zeros((0, 3))
        for r in np.unique(ranks[reps]):
            grp = reps[ranks[reps] == r]
            for rank in (max(int(r) - 1, 1), int(r)):
                if len(grp) == 0:
                    break
                Z = np.concatenate([X[grp], k[grp, None], T[grp]], axis=1)
                z, done = deflate(c, mats, Z, rank)
                x = z[done, :3] / np.linalg.norm(z[done, :3], axis=1)[:, None]
                X[grp[done]] = x
                polished = np.vstack([polished, x])
                grp = grp[~done]
        for u in polished:
            rest = np.nonzero(todo)[0]
            near = rest[_projective_gap(U[rest], u) <= CLUSTER_RADIUS]
            X[near] = u * np.sign(U[near] @ u)[:, None]
            todo[near] = False
    return X


def _completion_residuals(c, mats, U, tol):
    """Batched (k, t, residual) for unit directions U, k fitted only when null."""
    v = geodesic_lhs(c, U)
    gx = U @ METRIC
    cols = [np.einsum("jmi,nm->nij", mats, gx)] if len(mats) else []
    q = U[:, 0] ** 2 + U[:, 1] ** 2 - U[:, 2] ** 2
    null = np.abs(q) <= tol
    M0 = np.concatenate(cols, axis=2) if cols else np.zeros((len(U), 3, 0))
    M1 = np.concatenate([-gx[:, :, None], M0], axis=2)

    def fit(M):
        if M.shape[2] == 0:
            return np.zeros((len(U), 0)), v
        sol = _lsq(M, v)
        return sol, v + np.einsum("nij,nj->ni", M, sol)

    t0, r0 = fit(M0)
    s1, r1 = fit(M1)
    e0 = np.max(np.abs(r0), axis=1)
    e1 = np.max(np.abs(r1), axis=1)
    use1 = null & (e0 > tol)
    k = np.where(use1, s1[:, 0], 0.0)
    t = np.where(use1[:, None], s1[:, 1:], t0)
    res = np.where(use1, e1, e0)
    return k, t, res


def completion_residuals(instance, l_basis, X, tol: float = DEFAULT_TOL):
    """Batched geodesic-vector test for the rows of X.

    Returns (k, isotropy coefficients, residual) per row, computed on the
    unit directions; k is fitted only for null rows.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    U = X / np.linalg.norm(X, axis=1)[:, None]
    return _completion_residuals(_constants(instance), _iso_mats(l_basis), U, tol)


def numeric_search(instance, l_basis=(), samples: int = 10_000, tol: float = DEFAULT_TOL, seed: int = 0) -> list[GeodesicVector]:
    """Geodesic directions found by refining jittered Fibonacci-sphere starts.

    Refined points that sit near a singular root are polished by deflation.
    Every reported direction passes the geodesic-vector test at ``tol``;
    duplicates (rounded to 1e-7) are dropped and the order is deterministic.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    c = _constants(instance)
    mats = _iso_mats(l_basis)
    rng = np.random.default_rng(seed)
    X0 = fibonacci_sphere(samples) + JITTER * rng.standard_normal((samples, 3))
    X0 /= np.linalg.norm(X0, axis=1)[:, None]
    X, k, T = refine(c, mats, X0)
    norms = np.linalg.norm(X, axis=1)
    good = np.isfinite(norms) & (norms > 0.5)
    X, k, T = X[good], k[good], T[good]
    if len(X) == 0:
        return []
    X = _polish_stalled(c, mats, X, k, T)
    U = X / np.linalg.norm(X, axis=1)[:, None]
    U = _canonical_rows(U, 1e-7)
    kk, tt, res = _completion_residuals(c, mats, U, tol)
    # the best-converged point represents each rounded direction
    order = np.argsort(res, kind="stable")
    keys = np.round(U[order], 7) + 0.0
    _, first = np.unique(keys, axis=0, return_index=True)
    first = first[np.lexsort(keys[first].T[::-1])]
    pick = order[first]
    U, kk, tt, res = U[pick], kk[pick], tt[pick], res[pick]
    ok = res <= tol
    U, kk, tt, res = U[ok], kk[ok], tt[ok], res[ok]
    q = U[:, 0] ** 2 + U[:, 1] ** 2 - U[:, 2] ** 2
    causal = np.where(np.abs(q) <= tol, "null", np.where(q > 0, "spacelike", "timelike"))
    return [GeodesicVector(tuple(u), float(kv), tuple(tv), str(cz), float(r))
            for u, kv, tv, cz, r in zip(U.tolist(), kk.tolist(), tt.tolist(), causal, res.tolist())]


def null_directions(instance, l_basis=(), samples: int = 4096, tol: float = DEFAULT_TOL) -> list[GeodesicVector]:
    """Null geodesic directions found on the light cone itself.

    Null directions are (cos phi, sin phi, 1) up to scale. The completion
    residual (k and the isotropy part fitted by least squares) is scanned on
    a phi grid and every local minimum is narrowed by golden-section search.
    Unlike sphere sampling this also catches the null lines inside a
    continuum of geodesic directions.
    """
    c = _constants(instance)
    mats = _iso_mats(l_basis)
    scale = float(np.max(np.abs(c.c)))
    if scale == 0:
        scale = 1.0
    cn = StructureConstants(c.c / scale)

    def resid(phi):
        U = np.stack([np.cos(phi), np.sin(phi), np.ones_like(phi)], axis=1) / math.sqrt(2.0)
        return _completion_residuals(cn, mats, U, 1e-12)

    h = 2 * math.pi / samples
    phi = np.arange(samples) * h
    r = resid(phi)[2]
    mins = np.nonzero((r <= np.roll(r, 1)) & (r <= np.roll(r, -1)))[0]
    lo, hi = phi[mins] - h, phi[mins] + h
    g = (math.sqrt(5) - 1) / 2
    for _ in range(80):
        a, b = hi - g * (hi - lo), lo + g * (hi - lo)
        left = resid(a)[2] <= resid(b)[2]
        hi = np.where(left, b, hi)
        lo = np.where(left, lo, a)
    best = (lo + hi) / 2
    k, t, res = resid(best)
    out, seen = [], set()
    for p_, kv, tv, rv in zip(best, k, t, res):
        if rv > tol:
            continue
        raw = np.array([[math.cos(p_), math.sin(p_), 1.0]]) / math.sqrt(2.0)
        u = _canonical_rows(raw, 1e-7)[0]
        # k and t are odd in x
        sign = float(u @ raw[0])
        key = tuple(np.round(u, 7) + 0.0)
        if key in seen:
            continue
        seen.add(key)
        out.append(GeodesicVector(tuple(float(a) for a in u), sign * float(kv) * scale,
                                  tuple(sign * float(a) * scale for a in tv), "null", float(rv) * scale))
    return out


def direction_rank(vectors: Sequence, rel_tol: float = 1e-6) -> int:
    """Numerical rank of a set of unit directions."""
    arr = np.array([np.asarray(v, dtype=float) / np.linalg.norm(v) for v in vectors]).reshape(-1, 3)
    if len(arr) == 0:
        return 0
    s = np.linalg.svd(arr, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0]))
