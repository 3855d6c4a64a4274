"""Explicit matrices for the braid generators and all four spectral
R-matrix families, Yang-Baxter / unitarity / crossing checks, the
idempotent towers E(p) and F(p), and quantum traces at z = q^n.

Conventions:

* V has basis e_i, i in {-n, ..., -1, 1, ..., n}.  The displayed weight
  q^{(i+j)/2} is realized with the integer weight rho(i) = sign(i)(|i|-1)
  in place of i/2, so no square root of q is ever adjoined.  All structure
  invariants (skein relation, loop absorption, braid relation, trace
  calibration) are verified for this choice.
* Matrices are sparse: rows[i][j] holds a nonzero field element; zero
  entries are pruned eagerly so equality is structural.
* Inside BraidData, z is specialized to q^n throughout.
"""

from __future__ import annotations

import json
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

from .errors import (
    ArgumentOutOfRange,
    CalibrationFailed,
    DivisorVanishes,
    UnsupportedSize,
)
from .qcomb import brace, qbinom_ext, qint
from .recoupling import dimq_vector_recurrence_consistent, thread_budget
from .scalar import ONE, Q, U, V, Z, ScalarK, equal, integer_level, scalar

_QNF = Q.nf
_ONE_NF = ONE.nf


def _nf(x) -> object:
    """Coerce a ScalarK / int / field element to a raw field element."""
    if isinstance(x, ScalarK):
        return x.nf
    if isinstance(x, int):
        return scalar(x).nf
    return x


class SquareMatrixK:
    """Sparse square matrix over the coefficient field.

    Entries are raw field elements internally; ``entry`` wraps them as
    ScalarK without an expression DAG (matrix work would blow the DAG up).
    """

    __slots__ = ("dim", "rows")

    def __init__(self, dim: int):
        if dim < 1:
            raise ArgumentOutOfRange("matrix dimension must be positive")
        self.dim = dim
        self.rows: dict[int, dict[int, object]] = {}

    # -- construction -------------------------------------------------------

    @staticmethod
    def identity(dim: int) -> "SquareMatrixK":
        m = SquareMatrixK(dim)
        for i in range(dim):
            m.rows[i] = {i: _ONE_NF}
        return m

    @staticmethod
    def zero(dim: int) -> "SquareMatrixK":
        return SquareMatrixK(dim)

    @staticmethod
    def from_rows(rows: list[list]) -> "SquareMatrixK":
        m = SquareMatrixK(len(rows))
        for i, row in enumerate(rows):
            for j, val in enumerate(row):
                m.add_to(i, j, _nf(val))
        return m

    def copy(self) -> "SquareMatrixK":
        m = SquareMatrixK(self.dim)
        m.rows = {i: dict(r) for i, r in self.rows.items()}
        return m

    # -- entry access --------------------------------------------------------

    def add_to(self, i: int, j: int, val) -> None:
        val = _nf(val)
        row = self.rows.setdefault(i, {})
        new = row.get(j)
        new = val if new is None else new + val
        if new:
            row[j] = new
        else:
            row.pop(j, None)
            if not row:
                self.rows.pop(i, None)

    def entry(self, i: int, j: int) -> ScalarK:
        return ScalarK.from_field_element(
            self.rows.get(i, {}).get(j, scalar(0).nf)
        )

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    # -- algebra ---------------------------------------------------------------

    def __matmul__(self, other: "SquareMatrixK") -> "SquareMatrixK":
        if self.dim != other.dim:
            raise ArgumentOutOfRange("dimension mismatch in matrix product")
        out = SquareMatrixK(self.dim)
        orows = other.rows
        for i, arow in self.rows.items():
            acc: dict[int, object] = {}
            for k, aval in arow.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for j, bval in brow.items():
                    prod = aval * bval
                    cur = acc.get(j)
                    acc[j] = prod if cur is None else cur + prod
            row = {j: v for j, v in acc.items() if v}
            if row:
                out.rows[i] = row
        return out

    def __add__(self, other: "SquareMatrixK") -> "SquareMatrixK":
        if self.dim != other.dim:
            raise ArgumentOutOfRange("dimension mismatch in matrix sum")
        out = self.copy()
        for i, row in other.rows.items():
            for j, val in row.items():
                out.add_to(i, j, val)
        return out

    def __sub__(self, other: "SquareMatrixK") -> "SquareMatrixK":
        return self + other.scale(-1)

    def scale(self, c) -> "SquareMatrixK":
        c = _nf(c)
        out = SquareMatrixK(self.dim)
        if not c:
            return out
        for i, row in self.rows.items():
            out.rows[i] = {j: v * c for j, v in row.items()}
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, SquareMatrixK):
            return NotImplemented
        return self.dim == other.dim and self.rows == other.rows

    def __hash__(self):  # pragma: no cover - matrices are not dict keys
        raise TypeError("SquareMatrixK is unhashable")

    def is_zero(self) -> bool:
        return not self.rows

    def kron(self, other: "SquareMatrixK") -> "SquareMatrixK":
        d2 = other.dim
        out = SquareMatrixK(self.dim * d2)
        for i, arow in self.rows.items():
            for j, aval in arow.items():
                for k, brow in other.rows.items():
                    orow = out.rows.setdefault(i * d2 + k, {})
                    for l, bval in brow.items():
                        orow[j * d2 + l] = aval * bval
        return out

    def trace(self) -> ScalarK:
        acc = scalar(0).nf
        for i, row in self.rows.items():
            v = row.get(i)
            if v is not None:
                acc = acc + v
        return ScalarK.from_field_element(acc)


# --------------------------------------------------------------------------
# Braid data on V (x) V at z = q^n.


def _rho(i: int) -> int:
    return (abs(i) - 1) * (1 if i > 0 else -1)


@dataclass
class BraidData:
    """Braid matrices on V (x) V with z specialized to q^n.

    ``indices`` orders the basis of V; ``mu`` is the quantum-trace weight
    derived from the rank-one factorization of u_mat (see quantum_trace).
    """

    n: int
    indices: list
    sigma: SquareMatrixK
    sigma_inv: SquareMatrixK
    u_mat: SquareMatrixK
    mu: dict = dc_field(default_factory=dict)
    sigma_inv_display_mismatches: list = dc_field(default_factory=list)

    @property
    def d(self) -> int:
        return 2 * self.n

    @property
    def loop(self) -> ScalarK:
        return integer_level(brace(1) * qint(1, 0), self.n)


def build_braid_data(n: int) -> BraidData:
    """Construct sigma, sigma^-1, u on V (x) V for n in {1, 2, 3}.

    sigma^-1 is obtained from the skein relation
    sigma^-1 = sigma - (q - q^-1)(1 - u) and verified to be a true inverse;
    it is then compared against the displayed sum shape, and any term-level
    mismatch is reported as a warning (the display's -q E_{-i,i} (x) E_{i,-i}
    term has the wrong sign).
    """
    if n not in (1, 2, 3):
        raise UnsupportedSize("build_braid_data supports n in {1, 2, 3}")
    idx = [i for i in range(-n, 0)] + [i for i in range(1, n + 1)]
    pos = {i: k for k, i in enumerate(idx)}
    d = 2 * n

    def P(a: int, c: int) -> int:  # position of e_a (x) e_c in V (x) V
        return pos[a] * d + pos[c]

    w = {(i, j): (Q ** (_rho(i) + _rho(j))).nf for i in idx for j in idx}
    qm = (Q - Q**-1).nf

    u_mat = SquareMatrixK(d * d)
    for i in idx:
        for j in idx:
            u_mat.add_to(P(i, -i), P(j, -j), w[(i, j)])

    sigma = SquareMatrixK(d * d)
    for i in idx:
        sigma.add_to(P(i, i), P(i, i), Q)
        sigma.add_to(P(i, -i), P(-i, i), Q**-1)
        for j in idx:
            if j != i and j != -i:
                sigma.add_to(P(i, j), P(j, i), ONE)
            if i < j:
                sigma.add_to(P(i, j), P(i, j), qm)
            if j < -i:
                sigma.add_to(P(i, -i), P(j, -j), -(qm * w[(i, j)]))

    one = SquareMatrixK.identity(d * d)
    sigma_inv = sigma - (one - u_mat).scale(qm)
    if sigma @ sigma_inv != one:
        raise CalibrationFailed("sigma * sigma^-1 != 1 for the chosen weights")

    # Printed display of sigma^-1, for the term-level comparison.
    printed = SquareMatrixK(d * d)
    for i in idx:
        printed.add_to(P(i, i), P(i, i), Q**-1)
        printed.add_to(P(-i, i), P(i, -i), -Q)
        for j in idx:
            if j != i and j != -i:
                printed.add_to(P(i, j), P(j, i), ONE)
            if i > j:
                printed.add_to(P(i, j), P(i, j), -qm)
            if j > -i:
                printed.add_to(P(i, -i), P(j, -j), qm * w[(i, j)])
    mismatches = []
    for i in range(d * d):
        for j in range(d * d):
            a = sigma_inv.rows.get(i, {}).get(j)
            b = printed.rows.get(i, {}).get(j)
            if a != b:
                mismatches.append((i, j))
    if mismatches:
        warnings.warn(
            "displayed sigma^-1 sum disagrees with the true inverse at "
            f"{len(mismatches)} entries (e.g. the -q E_(-i,i) (x) E_(i,-i) "
            "term); the true inverse is used",
            stacklevel=2,
        )

    data = BraidData(
        n=n,
        indices=idx,
        sigma=sigma,
        sigma_inv=sigma_inv,
        u_mat=u_mat,
        sigma_inv_display_mismatches=mismatches,
    )
    data.mu = _derive_mu(data)
    return data


def _derive_mu(data: BraidData) -> dict:
    """Derive the diagonal trace weight mu from u = |cup><cap|.

    For u = sum w(i,j) E_{ij} (x) E_{-i,-j} the rank-one condition is
    w(i,j) w(k,l) = w(i,l) w(k,j); then mu_a := f(a) g(a) = w(a, a') with
    the normalization fixed by requiring the right partial closure of u
    (weights mu) and the left partial closure (weights mu^-1) to both be
    the identity, and tr(mu) = tr(mu^-1) = loop value.
    """
    idx = data.indices
    pos = {i: k for k, i in enumerate(idx)}
    d = data.d

    def P(a, c):
        return pos[a] * d + pos[c]

    w = {}
    for i in idx:
        for j in idx:
            w[(i, j)] = data.u_mat.rows.get(P(i, -i), {}).get(P(j, -j))
            if w[(i, j)] is None:
                raise CalibrationFailed("u is not supported on the cup pattern")
    i0 = idx[0]
    for i in idx:
        for j in idx:
            if w[(i, j)] * w[(i0, i0)] != w[(i, i0)] * w[(i0, j)]:
                raise CalibrationFailed("u does not factor as rank one")
    # mu_a = 1 / w(-a, -a): right closure gives w(a,a) mu_{-a} = 1.
    mu = {a: ScalarK.from_field_element(1 / w[(-a, -a)]) for a in idx}
    for a in idx:
        # right partial closure of u with mu must be the identity
        if not equal(ScalarK.from_field_element(w[(a, a)]) * mu[-a], ONE):
            raise CalibrationFailed("right partial closure of u is not 1")
        # left partial closure of u with mu^-1 must be the identity
        if not equal(ScalarK.from_field_element(w[(-a, -a)]) * mu[-a].inv(), ONE):
            raise CalibrationFailed("left partial closure of u is not 1")
    lp = data.loop
    tot = scalar(0)
    tot_inv = scalar(0)
    for a in idx:
        tot = tot + mu[a]
        tot_inv = tot_inv + mu[a].inv()
    if not (equal(tot, lp) and equal(tot_inv, lp)):
        raise CalibrationFailed("trace of mu does not match the loop value")
    # left closure with mu^-1: w(-a,-a) mu_{-a}^{-1} = 1 by construction.
    return mu


def check_braid_invariants(data: BraidData) -> bool:
    """Skein relation, loop absorption, twist eigenvalues and braid relation."""
    d2 = data.d * data.d
    one = SquareMatrixK.identity(d2)
    qm = Q - Q**-1
    zq = Q**data.n
    lp = data.loop
    ok = data.sigma - data.sigma_inv == (one - data.u_mat).scale(qm)
    ok = ok and data.u_mat @ data.u_mat == data.u_mat.scale(lp)
    ok = ok and data.sigma @ data.u_mat == data.u_mat.scale(zq**-2 * Q)
    ok = ok and data.sigma_inv @ data.u_mat == data.u_mat.scale(zq**2 * Q**-1)
    idm = SquareMatrixK.identity(data.d)
    s1 = data.sigma.kron(idm)
    s2 = idm.kron(data.sigma)
    ok = ok and s1 @ s2 @ s1 == s2 @ s1 @ s2
    return ok


# --------------------------------------------------------------------------
# Representations of the 2- and 3-strand algebras used in the YBE proofs.


@dataclass
class StrandRep:
    """Matrices for generators sigma_1, ..., sigma_{k-1} on one space."""

    dim: int
    sigmas: list
    sigma_invs: list
    u_mats: list
    zval: ScalarK  # the value of z in this representation


def hecke_two_dim_rep() -> StrandRep:
    """The printed 2-dimensional representation of the 3-strand Hecke
    algebra: sigma_1 -> [[q,0],[1,-q^-1]], sigma_2 -> [[-q^-1,1],[0,q]]."""
    s1 = SquareMatrixK.from_rows([[Q, 0], [ONE, -Q**-1]])
    s1i = SquareMatrixK.from_rows([[Q**-1, 0], [ONE, -Q]])
    s2 = SquareMatrixK.from_rows([[-Q**-1, ONE], [0, Q]])
    s2i = SquareMatrixK.from_rows([[-Q, ONE], [0, Q**-1]])
    zero = SquareMatrixK.zero(2)
    return StrandRep(2, [s1, s2], [s1i, s2i], [zero, zero], Z)


def bmw_three_dim_rep() -> StrandRep:
    """The 3-dimensional representation of the 3-strand algebra at generic
    z; u_i is recovered from the skein relation.

    The displayed matrices carry -z^{+-1}(z q^-2 + z^-1 q^2) in the
    sigma^{+-1} below/above-diagonal entry, but with that reading the two
    displayed matrices are not inverse to each other and the braid relation
    fails; solving the braid relation shows the exponent must be the
    opposite sign, -z^{-+1}(z q^-2 + z^-1 q^2).  Every other entry is as
    displayed, and with the fix the displayed inverses are exact inverses.
    """
    c = Z * Q**-2 + Z**-1 * Q**2
    s1 = SquareMatrixK.from_rows(
        [[Z**-2 * Q, 0, 0], [-(Z**-1) * c, -Q**-1, 0], [Q**-1, ONE, Q]]
    )
    s1i = SquareMatrixK.from_rows(
        [[Z**2 * Q**-1, 0, 0], [-Z * c, -Q, 0], [Q, ONE, Q**-1]]
    )
    s2 = SquareMatrixK.from_rows(
        [[Q, ONE, Q**-1], [0, -Q**-1, -(Z**-1) * c], [0, 0, Z**-2 * Q]]
    )
    s2i = SquareMatrixK.from_rows(
        [[Q**-1, ONE, Q], [0, -Q, -Z * c], [0, 0, Z**2 * Q**-1]]
    )
    one = SquareMatrixK.identity(3)
    qm = Q - Q**-1
    u1 = one - (s1 - s1i).scale(qm.inv())
    u2 = one - (s2 - s2i).scale(qm.inv())
    for s, si in ((s1, s1i), (s2, s2i)):
        if s @ si != one:
            raise CalibrationFailed("representation is not invertible")
    if s1 @ s2 @ s1 != s2 @ s1 @ s2:
        raise CalibrationFailed("braid relation fails in the 3-dim rep")
    return StrandRep(3, [s1, s2], [s1i, s2i], [u1, u2], Z)


def braid_rep_on_three_strands(data: BraidData) -> StrandRep:
    """sigma_1 = sigma (x) 1, sigma_2 = 1 (x) sigma on V^(x)3."""
    idm = SquareMatrixK.identity(data.d)
    return StrandRep(
        data.d**3,
        [data.sigma.kron(idm), idm.kron(data.sigma)],
        [data.sigma_inv.kron(idm), idm.kron(data.sigma_inv)],
        [data.u_mat.kron(idm), idm.kron(data.u_mat)],
        Q**data.n,
    )


# --------------------------------------------------------------------------
# Spectral R-matrices.

R_KINDS = ("HeckeF", "HeckeE", "BMW_D", "BMW_A")


def spectral_coeffs(kind: str, w: ScalarK, zval: ScalarK):
    """Return (c_sigma, c_sigma_inv, c_u, denominator) for the kind, so that

        R(w) = (c_sigma sigma + c_sigma_inv sigma^-1 + c_u u) / denominator.
    """
    qm = Q - Q**-1
    if kind == "HeckeF":
        return w, -(w.inv()), scalar(0), w * Q - w.inv() * Q**-1
    if kind == "HeckeE":
        return w.inv(), -w, scalar(0), w * Q - w.inv() * Q**-1
    if kind == "BMW_D":
        c = w * zval * Q**-1 - w.inv() * zval.inv() * Q
        cu = (zval * Q**-1 - zval.inv() * Q) * qm
        return c * w, -(c * w.inv()), cu, c * (w * Q - w.inv() * Q**-1)
    if kind == "BMW_A":
        c = w * zval.inv() + w.inv() * zval
        cu = (zval + zval.inv()) * qm
        return c * w.inv(), -(c * w), cu, c * (w * Q - w.inv() * Q**-1)
    raise ArgumentOutOfRange(f"unknown spectral kind {kind!r}")


def spectral_R(
    kind: str,
    sigma: SquareMatrixK,
    sigma_inv: SquareMatrixK,
    u_mat: SquareMatrixK | None,
    w: ScalarK,
    zval: ScalarK,
) -> SquareMatrixK:
    """Assemble the spectral R-matrix of the given kind at parameter w."""
    cs, csi, cu, den = spectral_coeffs(kind, w, zval)
    if den.is_zero():
        raise DivisorVanishes(f"{kind} denominator vanishes at this parameter")
    out = sigma.scale(cs) + sigma_inv.scale(csi)
    if not cu.is_zero():
        if u_mat is None:
            raise ArgumentOutOfRange(f"{kind} needs the u matrix")
        out = out + u_mat.scale(cu)
    return out.scale(den.inv())


def _rep_R(kind: str, rep: StrandRep, i: int, w: ScalarK) -> SquareMatrixK:
    return spectral_R(
        kind, rep.sigmas[i], rep.sigma_invs[i], rep.u_mats[i], w, rep.zval
    )


def check_ybe(kind: str, rep: StrandRep) -> bool:
    """R_1(u) R_2(uv) R_1(v) = R_2(v) R_1(uv) R_2(u) with FORMAL u, v."""
    r1u = _rep_R(kind, rep, 0, U)
    r2uv = _rep_R(kind, rep, 1, U * V)
    r1v = _rep_R(kind, rep, 0, V)
    r2u = _rep_R(kind, rep, 1, U)
    r1uv = _rep_R(kind, rep, 0, U * V)
    r2v = _rep_R(kind, rep, 1, V)
    return r1u @ r2uv @ r1v == r2v @ r1uv @ r2u


def check_unitarity(kind: str, rep: StrandRep, i: int = 0) -> bool:
    """R(u) R(u^-1) = 1 with formal u, and R(1) = 1."""
    one = SquareMatrixK.identity(rep.dim)
    ru = _rep_R(kind, rep, i, U)
    rui = _rep_R(kind, rep, i, U.inv())
    return ru @ rui == one and _rep_R(kind, rep, i, ONE) == one


def check_hecke_quotient(rep: StrandRep, i: int = 0) -> bool:
    """Imposing u = 0 in the BMW_D combination reproduces the HeckeF matrix."""
    full = spectral_R(
        "BMW_D", rep.sigmas[i], rep.sigma_invs[i], SquareMatrixK.zero(rep.dim),
        U, rep.zval,
    )
    hecke = spectral_R(
        "HeckeF", rep.sigmas[i], rep.sigma_invs[i], None, U, rep.zval
    )
    return full == hecke


# --------------------------------------------------------------------------
# Idempotent towers.

_TOWER_SPEC = {
    "F": ("BMW_D", Q),
    "E": ("BMW_A", -(Q**-1)),
}


def idempotent_tower(kind: str, data: BraidData, p_max: int) -> dict:
    """E(p) or F(p) on V^(x)p for p = 1..p_max, via
    X(p+1) = X(p) R_p(q^p) X(p) with X(1) = 1."""
    if kind not in _TOWER_SPEC:
        raise ArgumentOutOfRange("tower kind must be 'E' or 'F'")
    budget = 4 if data.n <= 2 else 3
    if p_max > budget:
        raise UnsupportedSize(
            f"p_max {p_max} exceeds the dimension budget for n = {data.n}"
        )
    rkind, _ = _TOWER_SPEC[kind]
    d = data.d
    zq = Q**data.n
    out = {1: SquareMatrixK.identity(d)}
    for p in range(1, p_max):
        lifted = out[p].kron(SquareMatrixK.identity(d))
        r_small = spectral_R(
            rkind, data.sigma, data.sigma_inv, data.u_mat, Q**p, zq
        )
        r_p = SquareMatrixK.identity(d ** (p - 1)).kron(r_small)
        out[p + 1] = lifted @ r_p @ lifted
    return out


def strand_generator(data: BraidData, which: str, i: int, p: int) -> SquareMatrixK:
    """sigma_i / sigma_i^-1 / u_i acting on strands (i, i+1) of V^(x)p."""
    base = {"sigma": data.sigma, "sigma_inv": data.sigma_inv, "u": data.u_mat}[
        which
    ]
    d = data.d
    if not 1 <= i <= p - 1:
        raise ArgumentOutOfRange("strand index out of range")
    left = SquareMatrixK.identity(d ** (i - 1))
    right = SquareMatrixK.identity(d ** (p - 1 - i))
    return left.kron(base).kron(right)


def check_tower_eigenrelations(kind: str, data: BraidData, p_max: int) -> bool:
    """Idempotency, u_i X = 0 = X u_i, sigma_i X = eig X = X sigma_i."""
    _, eig = _TOWER_SPEC[kind]
    tower = idempotent_tower(kind, data, p_max)
    for p in range(2, p_max + 1):
        x = tower[p]
        if x @ x != x:
            return False
        for i in range(1, p):
            ui = strand_generator(data, "u", i, p)
            si = strand_generator(data, "sigma", i, p)
            if not (ui @ x).is_zero() or not (x @ ui).is_zero():
                return False
            if si @ x != x.scale(eig) or x @ si != x.scale(eig):
                return False
    return True


def check_tower_absorption(kind: str, data: BraidData, p_max: int) -> bool:
    """R_i(u) X(p) = X(p) = X(p) R_i(u) with FORMAL u."""
    rkind, _ = _TOWER_SPEC[kind]
    zq = Q**data.n
    tower = idempotent_tower(kind, data, p_max)
    for p in range(2, p_max + 1):
        x = tower[p]
        for i in range(1, p):
            r = spectral_R(
                rkind,
                strand_generator(data, "sigma", i, p),
                strand_generator(data, "sigma_inv", i, p),
                strand_generator(data, "u", i, p),
                U,
                zq,
            )
            if r @ x != x or x @ r != x:
                return False
    return True


def hecke_tower_in_rep(kind: str, rep: StrandRep, p_max: int = 3) -> dict:
    """Idempotents from the Hecke spectral matrices inside a fixed
    representation of the 3-strand algebra (all on the same space)."""
    if kind not in ("F", "E"):
        raise ArgumentOutOfRange("tower kind must be 'E' or 'F'")
    if p_max > len(rep.sigmas) + 1:
        raise UnsupportedSize("not enough generators in the representation")
    rkind = "HeckeF" if kind == "F" else "HeckeE"
    out = {1: SquareMatrixK.identity(rep.dim)}
    for p in range(1, p_max):
        r_p = _rep_R(rkind, rep, p - 1, Q**p)
        out[p + 1] = out[p] @ r_p @ out[p]
    return out


def check_hecke_tower(kind: str) -> bool:
    """In the 2-dim representation, Hecke-tower idempotents are idempotent
    and satisfy sigma_i X = eig X with eig = q (F) or -q^-1 (E)."""
    rep = hecke_two_dim_rep()
    eig = Q if kind == "F" else -(Q**-1)
    tower = hecke_tower_in_rep(kind, rep, 3)
    for p in (2, 3):
        x = tower[p]
        if x @ x != x:
            return False
        for i in range(p - 1):
            s = rep.sigmas[i]
            if s @ x != x.scale(eig) or x @ s != x.scale(eig):
                return False
    return True


# --------------------------------------------------------------------------
# Quantum trace.


def quantum_trace(x: SquareMatrixK, data: BraidData) -> ScalarK:
    """tr(x mu^(x)p), with p determined from the matrix dimension."""
    d = data.d
    p = 0
    dim = 1
    while dim < x.dim:
        dim *= d
        p += 1
    if dim != x.dim:
        raise ArgumentOutOfRange("matrix dimension is not a power of dim V")
    weights = [data.mu[i].nf for i in data.indices]

    def weight_of(t: int):
        w = _ONE_NF
        for _ in range(p):
            w = w * weights[t % d]
            t //= d
        return w

    acc = scalar(0).nf
    for i, row in x.rows.items():
        v = row.get(i)
        if v is not None:
            acc = acc + v * weight_of(i)
    return ScalarK.from_field_element(acc)


def dimq_sym_recursive(p: int) -> ScalarK:
    """Graded dimension of the p-th symmetric-type idempotent from the
    two-term recurrence [n+p-1][p+1] dim(p+1) = [2n+p-2][n+p] dim(p),
    seeded with dim(1) = {1} delta.  (The telescoped product stays finite
    at every integer level, unlike the closed form's [n-1] denominator.)
    """
    if p < 0:
        raise ArgumentOutOfRange("p must be nonnegative")
    if p == 0:
        return ONE
    out = brace(1) * qint(1, 0)
    for j in range(1, p):
        out = out * qint(2, j - 2) * qint(1, j) / (qint(1, j - 1) * qint(0, j + 1))
    return out


def dimq_sym_closed(p: int) -> ScalarK:
    """Closed form [n+p-1]/[n-1] * [2n+p-3 choose p] (generic z; the [n-1]
    denominator vanishes at integer level n = 1, where the recursive form
    must be used)."""
    if p < 0:
        raise ArgumentOutOfRange("p must be nonnegative")
    if p == 0:
        return ONE
    return qint(1, p - 1) / qint(1, -1) * qbinom_ext(2, p - 3, p)


def check_quantum_dims(n: int, p_max: int) -> bool:
    """quantum_trace(E(p)) and quantum_trace(F(p)) match the recurrence-
    normative graded dimensions at z = q^n, for p <= p_max."""
    data = build_braid_data(n)
    towers = {k: idempotent_tower(k, data, p_max) for k in ("E", "F")}
    for p in range(1, p_max + 1):
        te = quantum_trace(towers["E"][p], data)
        tf = quantum_trace(towers["F"][p], data)
        if not equal(te, integer_level(dimq_vector_recurrence_consistent(p), n)):
            return False
        if not equal(tf, integer_level(dimq_sym_recursive(p), n)):
            return False
    return True


# --------------------------------------------------------------------------
# Crossing symmetry (scalar check on formal coefficients).


def _canonical_skein_coeffs(c1, cs, csi, cu):
    """Rewrite a formal combination a*1 + b*sigma + c*sigma^-1 + d*u in the
    canonical gauge with zero coefficient on 1, using
    1 = (sigma - sigma^-1)/(q - q^-1) + u."""
    qm = Q - Q**-1
    return (cs + c1 / qm, csi - c1 / qm, cu + c1)


def check_crossing_symmetry_D(report: bool = False):
    """Quarter-turn symmetry of the BMW_D numerator.

    The quarter turn swaps 1 <-> u and sigma <-> sigma^-1.  Applying it to
    the numerator N(u) of R(u) and reducing to the canonical skein gauge
    must give a scalar multiple lambda of N(u^-1 z^-1 q); lambda is solved
    from the sigma coefficient and asserted on the others.  The displayed
    prefactor (u - u^-1)(u z q^-2 - u^-1 z^-1 q^-2) / D(u^-1 z^-1 q) is
    compared against the solved lambda and the mismatch is reported.
    """
    w = U
    cs, csi, cu, den = spectral_coeffs("BMW_D", w, Z)
    c1 = scalar(0)
    # quarter turn: 1 <-> u, sigma <-> sigma^-1
    t1, ts, tsi, tu = cu, csi, cs, c1
    ts, tsi, tu = _canonical_skein_coeffs(t1, ts, tsi, tu)
    w2 = U.inv() * Z.inv() * Q
    bs, bsi, bu, bden = spectral_coeffs("BMW_D", w2, Z)
    bs, bsi, bu = _canonical_skein_coeffs(scalar(0), bs, bsi, bu)
    lam = ts / bs
    ok = equal(tsi, lam * bsi) and equal(tu, lam * bu)
    displayed = (U - U.inv()) * (U * Z * Q**-2 - U.inv() * Z.inv() * Q**-2) / bden
    prefactor_matches = equal(lam, displayed)
    # The displayed prefactor's last exponent is a typo: with q^2 instead of
    # q^-2 in the second term the prefactor matches lambda exactly.
    corrected = (U - U.inv()) * (U * Z * Q**-2 - U.inv() * Z.inv() * Q**2) / bden
    corrected_matches = equal(lam, corrected)
    if report:
        return {
            "proportional": ok,
            "displayed_prefactor_matches": prefactor_matches,
            "corrected_prefactor_matches": corrected_matches,
            "lambda_over_displayed": None
            if prefactor_matches
            else lam / displayed,
        }
    return ok and corrected_matches


# --------------------------------------------------------------------------
# Check-runner manifest.

MANIFEST_FORMAT_VERSION = 1


def _check_braid(n: int) -> bool:
    return check_braid_invariants(build_braid_data(n))


def _check_ybe_named(kind: str, rep: str, n: int = 1) -> bool:
    r = _resolve_rep(rep, n)
    return check_ybe(kind, r)


def _check_unitarity_named(kind: str, rep: str, n: int = 1) -> bool:
    r = _resolve_rep(rep, n)
    return check_unitarity(kind, r)


def _resolve_rep(rep: str, n: int) -> StrandRep:
    if rep == "hecke2":
        return hecke_two_dim_rep()
    if rep == "bmw3":
        return bmw_three_dim_rep()
    if rep == "tensor":
        return braid_rep_on_three_strands(build_braid_data(n))
    raise ArgumentOutOfRange(f"unknown representation {rep!r}")


def _check_tower(kind: str, n: int, p_max: int) -> bool:
    data = build_braid_data(n)
    return check_tower_eigenrelations(kind, data, p_max) and check_tower_absorption(
        kind, data, p_max
    )


def _check_hecke_quotient_named() -> bool:
    return check_hecke_quotient(bmw_three_dim_rep())


CHECKS = {
    "braid-invariants": _check_braid,
    "ybe": _check_ybe_named,
    "unitarity": _check_unitarity_named,
    "tower": _check_tower,
    "quantum-dims": check_quantum_dims,
    "crossing-symmetry-D": check_crossing_symmetry_D,
    "hecke-tower": check_hecke_tower,
    "hecke-quotient": _check_hecke_quotient_named,
}


def default_manifest() -> dict:
    """The full matrix suite as a check-runner manifest document."""
    checks = [
        {"name": "braid-invariants", "params": {"n": 1}},
        {"name": "braid-invariants", "params": {"n": 2}},
        {"name": "ybe", "params": {"kind": "HeckeF", "rep": "hecke2"}},
        {"name": "ybe", "params": {"kind": "HeckeE", "rep": "hecke2"}},
        {"name": "ybe", "params": {"kind": "BMW_D", "rep": "bmw3"}},
        {"name": "ybe", "params": {"kind": "BMW_A", "rep": "bmw3"}},
        {"name": "ybe", "params": {"kind": "BMW_D", "rep": "tensor", "n": 1}},
        {"name": "ybe", "params": {"kind": "BMW_A", "rep": "tensor", "n": 1}},
        {"name": "unitarity", "params": {"kind": "BMW_D", "rep": "bmw3"}},
        {"name": "unitarity", "params": {"kind": "BMW_A", "rep": "bmw3"}},
        {"name": "unitarity", "params": {"kind": "HeckeF", "rep": "hecke2"}},
        {"name": "unitarity", "params": {"kind": "HeckeE", "rep": "hecke2"}},
        {"name": "tower", "params": {"kind": "E", "n": 1, "p_max": 3}},
        {"name": "tower", "params": {"kind": "F", "n": 1, "p_max": 3}},
        {"name": "tower", "params": {"kind": "E", "n": 2, "p_max": 3}},
        {"name": "tower", "params": {"kind": "F", "n": 2, "p_max": 3}},
        {"name": "quantum-dims", "params": {"n": 1, "p_max": 3}},
        {"name": "quantum-dims", "params": {"n": 2, "p_max": 3}},
        {"name": "crossing-symmetry-D", "params": {}},
        {"name": "hecke-tower", "params": {"kind": "F"}},
        {"name": "hecke-tower", "params": {"kind": "E"}},
        {"name": "hecke-quotient", "params": {}},
    ]
    return {"format_version": MANIFEST_FORMAT_VERSION, "checks": checks}


def run_manifest(doc: dict, threads: int | None = None) -> dict:
    """Run a manifest; returns a machine-readable pass/fail table."""
    if threads is None:
        threads = thread_budget()
    checks = doc["checks"]

    def run_one(item):
        fn = CHECKS.get(item["name"])
        if fn is None:
            return {"name": item["name"], "params": item.get("params", {}),
                    "passed": False, "error": "unknown check"}
        try:
            passed = bool(fn(**item.get("params", {})))
            return {"name": item["name"], "params": item.get("params", {}),
                    "passed": passed}
        except Exception as exc:  # pragma: no cover - surfaced in the table
            return {"name": item["name"], "params": item.get("params", {}),
                    "passed": False, "error": f"{type(exc).__name__}: {exc}"}

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_one, checks))
    else:
        results = [run_one(item) for item in checks]
    return {
        "format_version": MANIFEST_FORMAT_VERSION,
        "results": results,
        "all_passed": all(r["passed"] for r in results),
    }


def run_manifest_json(text: str, threads: int | None = None) -> str:
    return json.dumps(run_manifest(json.loads(text), threads), indent=2)
