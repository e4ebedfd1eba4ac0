"""Inner-outer structure on the circle grid.

Classical factorization f = (unimodular) * (outer) is built from the
boundary modulus: u = log|f|, its harmonic conjugate, and
O = exp(u + i*conj(u)).  The modulus of O matches |f| sample for
sample, O(0) > 0 fixes the phase, and the inner part is the quotient.

The same machinery drives the z^n variants.  A function J is n-inner
when the shifted family {z^(n m) J} is orthonormal; a function g of the
form s(z^n) is n-outer when s is outer in the base variable.  The
factorization f = J_1 f_1 + ... + J_r f_r with n-inner J_i and n-outer
f_i is computed two ways:

  * method "direct": split f(z) = sum_i z^i H_i(z^n), form the
    pointwise modulus phi = sqrt(sum |H_i|^2) in the base variable,
    take its outer function O, and set

        J(z) = sum_i z^i (H_i/O)(z^n),    f_1(z) = O(z^n).

    A single generator always yields r = 1 this way, the residual is
    exact to rounding because every step is a sample identity, and the
    only approximation is the working grid size (chosen adaptively).

  * method "wandering": the subspace pipeline.  Orthonormalize the
    shifts {z^(n k) f}, subtract the once-shifted span, read the rank
    off the singular values, and least-squares the coefficients.  Kept
    as the reference construction; its truncation converges slowly
    whenever the true J is not a polynomial, so it is not the default.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from .blaschke import BlaschkeSpec, blaschke_eval, compose, power_spec
from .circlefn import (
    EPS_LOG,
    CircleFunction,
    analyze,
    freq_indices,
    grid,
    norm2,
    pointwise,
    resample,
)
from .decomp import decompose_blaschke, zn_series_components
from .errors import (
    DomainError,
    FactorizationError,
    ParameterError,
    RankError,
    SingularityError,
    SizeError,
)

__all__ = [
    "InnerOuterPair",
    "NInnerOuterBundle",
    "BInnerMatrix",
    "OuterReport",
    "BInnerReport",
    "NOuterReport",
    "harmonic_conjugate",
    "outer_from_modulus",
    "inner_outer",
    "is_outer",
    "is_B_inner",
    "b_inner_matrix_from",
    "n_inner_outer_factorize",
    "is_n_outer",
    "outer_multiplier",
]

TOL_OUTER = 1e-6
TOL_B_INNER = 1e-7
TOL_FACTOR_RESIDUAL = 1e-6

# Working-grid control for the direct n-inner construction.  The grid
# doubles until the quotient coefficients have decayed by mid-band.
WORK_TAIL_TARGET = 1e-9
WORK_GRID_FLOOR = 8192
WORK_GRID_CAP = 1 << 17


@dataclass(frozen=True, eq=False)
class InnerOuterPair:
    """f = inner * outer with the two measured quality numbers."""

    inner: CircleFunction
    outer: CircleFunction
    residual: float
    unimodularity_defect: float

    def meets_invariants(self, tol: float = 1e-7) -> bool:
        return self.residual <= tol and self.unimodularity_defect <= tol


@dataclass(frozen=True, eq=False)
class OuterReport:
    """Jensen-equality verdict: log|f(0)| against the log-modulus mean."""

    passed: bool
    defect: float

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True, eq=False)
class BInnerReport:
    passed: bool
    gram_defect: float
    m_max: int

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True, eq=False)
class NOuterReport:
    """Outcome of the n-outer test.

    The input factors as carrier_polynomial(z) * base_series(z^n) when
    rank1_defect is small; the test passes when additionally the base
    series is outer.  carrier_polynomial has unit coefficient norm and
    positive-real leading nonzero coefficient.
    """

    passed: bool
    rank1_defect: float
    outer_defect: float
    carrier_polynomial: Optional[CircleFunction] = None
    base_series: Optional[CircleFunction] = None

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True, eq=False)
class BInnerMatrix:
    """Columns phi_j expanded over the factor slots of B.

    entries[i][j] is the slot-i component of phi_j, a series in B.
    defect measures the columns' joint orthonormality through the
    coefficient pairing; joint_defect is the same statement measured
    directly on the shifted family {B^m phi_j} and should agree.
    """

    rows: int
    cols: int
    entries: Tuple[Tuple[CircleFunction, ...], ...]
    defect: float
    joint_defect: float
    tol: float
    decomposition_residual: float

    @property
    def passed(self) -> bool:
        return self.defect <= self.tol


@dataclass(frozen=True, eq=False)
class NInnerOuterBundle:
    """f = sum_i inners[i] * outers[i] with n-inner/n-outer parts.

    The functions live on the grid they were computed on, which the
    direct method grows beyond the input grid when coefficient decay
    demands it; ``n_samples`` records it.
    """

    n: int
    r: int
    inners: Tuple[CircleFunction, ...]
    outers: Tuple[CircleFunction, ...]
    residual: float
    gram_defect: float
    method: str
    n_samples: int
    parseval_gap: float
    outer_reports: Tuple[NOuterReport, ...]
    inner_reports: Tuple[BInnerReport, ...] = field(default=())

    def meets_invariants(self, tol: float = TOL_FACTOR_RESIDUAL) -> bool:
        return (self.residual <= tol and self.gram_defect <= tol
                and all(rep.passed for rep in self.outer_reports))


def _require_analytic(f: CircleFunction, who: str):
    if not f.is_analytic():
        raise DomainError(
            f"{who} needs an analytic input; negative coefficient mass "
            f"is {f.negative_energy:.3e}"
        )


def harmonic_conjugate(u: CircleFunction) -> CircleFunction:
    """Conjugate function: coefficient j is scaled by -i*sgn(j).

    The mean is dropped and so is the bottom (unpaired) index, which
    keeps the output real; u + i*conjugate is then analytic except for
    whatever mass u carried at that unpaired index.
    """
    if float(np.max(np.abs(u.samples.imag))) > 1e-10:
        raise DomainError("harmonic_conjugate needs a real-valued input")
    N = u.n_samples
    freqs = freq_indices(N)
    c = -1j * np.sign(freqs) * u.coeffs
    c[0] = 0.0
    return CircleFunction.from_coeffs(c)


def outer_from_modulus(w: CircleFunction, regularize: bool = False) -> CircleFunction:
    """The analytic function with |O| = w on the grid and O(0) > 0.

    O = exp(u + i*conj(u)) with u = log w.  Moduli below EPS_LOG raise
    SingularityError unless ``regularize`` floors them there.
    """
    vals = w.samples
    if float(np.max(np.abs(vals.imag))) > 1e-10:
        raise DomainError("outer_from_modulus needs a real-valued modulus")
    mod = vals.real
    if float(np.min(mod)) < -1e-10:
        raise DomainError("outer_from_modulus needs a nonnegative modulus")
    mod = np.maximum(mod, 0.0)
    bad = np.nonzero(mod < EPS_LOG)[0]
    if bad.size and not regularize:
        raise SingularityError(
            f"modulus below {EPS_LOG:g} at {bad.size} grid points; "
            f"pass regularize=True to floor it", bad[:16]
        )
    u_samples = np.log(np.maximum(mod, EPS_LOG))
    u = CircleFunction.from_samples(u_samples)
    conj_samples = harmonic_conjugate(u).samples.real
    return CircleFunction.from_samples(np.exp(u_samples + 1j * conj_samples))


def inner_outer(f: CircleFunction, regularize: bool = False) -> InnerOuterPair:
    """Split f into a unimodular part times the outer part of |f|."""
    _require_analytic(f, "inner_outer")
    modulus = pointwise(f, None, "abs")
    outer = outer_from_modulus(modulus, regularize=regularize)
    inner = pointwise(f, outer, "div", regularize=regularize)
    # The product is re-formed sample-wise: it is a verification
    # number, not a new bandwidth-guarded function.
    prod = inner.samples * outer.samples
    residual = float(np.sqrt(np.mean(np.abs(prod - f.samples) ** 2)))
    unimod = float(np.max(np.abs(np.abs(inner.samples) - 1.0)))
    return InnerOuterPair(inner=inner, outer=outer, residual=residual,
                          unimodularity_defect=unimod)


def is_outer(f: CircleFunction, regularize: bool = False) -> OuterReport:
    """Test the Jensen equality log|f(0)| = mean of log|f|.

    A zero value at the origin short-circuits to a failed report with
    an infinite defect.
    """
    _require_analytic(f, "is_outer")
    a0 = f.coeff(0)
    if abs(a0) < EPS_LOG:
        return OuterReport(passed=False, defect=float("inf"))
    mod = np.abs(f.samples)
    bad = np.nonzero(mod < EPS_LOG)[0]
    if bad.size and not regularize:
        raise SingularityError(
            f"modulus below {EPS_LOG:g} at {bad.size} grid points", bad[:16]
        )
    mean_log = float(np.mean(np.log(np.maximum(mod, EPS_LOG))))
    defect = abs(float(np.log(abs(a0))) - mean_log)
    return OuterReport(passed=defect <= TOL_OUTER, defect=defect)


def _shift_gram(mult_samples: np.ndarray, phi_samples: np.ndarray,
                m_max: int) -> np.ndarray:
    """Gram of {mult^m phi : m <= m_max} for unimodular mult.

    Unimodularity collapses the pairings to moments of |phi|^2 against
    powers of mult, so the matrix is Hermitian Toeplitz.
    """
    weights = np.abs(phi_samples) ** 2
    moments = np.empty(m_max + 1, dtype=complex)
    acc = weights.astype(complex)
    for d in range(m_max + 1):
        moments[d] = np.mean(acc)
        acc = acc * mult_samples
    G = np.empty((m_max + 1, m_max + 1), dtype=complex)
    for m in range(m_max + 1):
        for mp in range(m_max + 1):
            d = m - mp
            G[m, mp] = moments[d] if d >= 0 else np.conj(moments[-d])
    return G


def is_B_inner(phi: CircleFunction, spec: BlaschkeSpec,
               m_max: int) -> BInnerReport:
    """Check that {B^m phi : m <= m_max} is orthonormal."""
    _require_analytic(phi, "is_B_inner")
    if m_max < 0:
        raise ParameterError("m_max must be >= 0")
    bz = blaschke_eval(spec, grid(phi.n_samples))
    G = _shift_gram(bz, phi.samples, m_max)
    defect = float(np.max(np.abs(G - np.eye(m_max + 1))))
    return BInnerReport(passed=defect <= TOL_B_INNER, gram_defect=defect,
                        m_max=m_max)


def _joint_gram_defect(mult_samples: np.ndarray,
                       members: Sequence[np.ndarray], m_max: int) -> float:
    """Orthonormality defect of {mult^m v : v in members, m <= m_max}."""
    rows = []
    for v in members:
        acc = v
        for _ in range(m_max + 1):
            rows.append(acc)
            acc = acc * mult_samples
    V = np.asarray(rows)
    G = (V @ V.conj().T) / V.shape[1]
    return float(np.max(np.abs(G - np.eye(V.shape[0]))))


def b_inner_matrix_from(phis: Sequence[CircleFunction], spec: BlaschkeSpec,
                        m_max: int, tol: float = TOL_B_INNER) -> BInnerMatrix:
    """Expand each phi_j over the factor slots of B and grade the result.

    The column pairing sums coefficient inner products across slots; a
    family is jointly B-inner exactly when this matrix of pairings is
    the identity, and the directly measured shifted-family Gram is
    reported alongside as a cross-check.
    """
    r = len(phis)
    n = spec.degree
    if r == 0:
        raise ParameterError("need at least one column")
    if r > n:
        raise RankError(f"{r} columns exceed the {n} factor slots of B")
    N = phis[0].n_samples
    coeff_blocks = []
    entry_cols = []
    worst_resid = 0.0
    for phi in phis:
        if phi.n_samples != N:
            raise SizeError("all columns must share one grid")
        dec = decompose_blaschke(phi, spec, m_max)
        coeff_blocks.append(dec.basis_coefficients)
        entry_cols.append(dec.components)
        worst_resid = max(worst_resid, dec.residual)
    AtA = np.empty((r, r), dtype=complex)
    for p in range(r):
        for q in range(r):
            AtA[p, q] = np.vdot(coeff_blocks[p], coeff_blocks[q])
    defect = float(np.max(np.abs(AtA - np.eye(r))))
    bz = blaschke_eval(spec, grid(N))
    joint = _joint_gram_defect(bz, [phi.samples for phi in phis], m_max)
    entries = tuple(
        tuple(entry_cols[j][i] for j in range(r)) for i in range(n)
    )
    return BInnerMatrix(rows=n, cols=r, entries=entries, defect=defect,
                        joint_defect=joint, tol=tol,
                        decomposition_residual=worst_resid)


def _direct_n_factorization(f: CircleFunction, n: int, regularize: bool,
                            m_max_check: int):
    """Exact single-generator construction; see the module docstring."""
    N = f.n_samples
    n_work = max(N, WORK_GRID_FLOOR)
    while True:
        parts = [resample(s, n_work) for s in zn_series_components(f, n)]
        phi_sq = np.zeros(n_work)
        for p in parts:
            phi_sq += np.abs(p.samples) ** 2
        modulus = CircleFunction.from_samples(np.sqrt(phi_sq))
        outer = outer_from_modulus(modulus, regularize=regularize)
        thetas = [p.samples / outer.samples for p in parts]
        # Quotient coefficient tails drive every grid-level error here;
        # grow the grid until they have died by mid-band.
        half = n_work // 2
        start = half + max(half // (2 * n), 1)
        tail = max(
            float(np.linalg.norm(analyze(t)[start:])) for t in thetas
        )
        if tail <= WORK_TAIL_TARGET or n_work >= WORK_GRID_CAP:
            break
        n_work *= 2
    z = grid(n_work)
    idx = (n * np.arange(n_work)) % n_work
    J_samples = np.zeros(n_work, dtype=complex)
    for i, t in enumerate(thetas):
        J_samples += (z ** i) * t[idx]
    J = CircleFunction.from_samples(J_samples)
    f1 = CircleFunction.from_samples(outer.samples[idx])
    f_work = resample(f, n_work)
    residual = float(np.sqrt(np.mean(
        np.abs(J.samples * f1.samples - f_work.samples) ** 2)))
    gram = _joint_gram_defect(z ** n, [J.samples], m_max_check)
    parseval = abs(norm2(f_work) ** 2 - norm2(f1) ** 2)
    return J, f1, residual, gram, parseval, n_work, tail


def _wandering_n_factorization(f: CircleFunction, n: int, k_max: int,
                               sv_threshold: float, m_max_check: int):
    """Literal shifted-span pipeline at truncation k_max."""
    N = f.n_samples
    half = N // 2
    top = f.top_index()
    if k_max * n < 2 * top:
        raise ParameterError(
            f"k_max = {k_max} is too small: need k_max * n >= "
            f"2 * top index = {2 * top}"
        )
    D = top + n * (k_max + 1)
    if D >= half:
        raise SizeError(
            f"shifts reach coefficient index {D}, beyond the grid band "
            f"{half - 1}; enlarge the grid or lower k_max"
        )
    taylor = f.coeffs[half:half + top + 1]
    cols = np.zeros((D + 1, k_max + 2), dtype=complex)
    for k in range(k_max + 2):
        cols[n * k:n * k + top + 1, k] = taylor
    span_cols = cols[:, :k_max + 1]
    shifted_cols = cols[:, 1:]
    QB, _ = np.linalg.qr(shifted_cols)
    resid = span_cols - QB @ (QB.conj().T @ span_cols)
    U, S, _ = np.linalg.svd(resid, full_matrices=False)
    if S.size == 0 or S[0] < 1e-12:
        raise FactorizationError(
            "shifted span equals the span; no orthogonal complement",
            diagnostics={"singular_values": S.tolist()})
    r = int(np.sum(S >= sv_threshold * S[0]))
    J_vecs = U[:, :r]
    inners = []
    for i in range(r):
        c = np.zeros(N, dtype=complex)
        c[half:half + D + 1] = J_vecs[:, i]
        inners.append(CircleFunction.from_coeffs(c))
    # Least squares for f = sum_{i,k} c_{ik} z^(n k) J_i over the band
    # the shifted columns can reach.
    rows = D + 1
    design = np.zeros((rows, r * (k_max + 1)), dtype=complex)
    for i in range(r):
        for k in range(k_max + 1):
            col = np.zeros(rows, dtype=complex)
            src = J_vecs[:rows - n * k, i]
            col[n * k:n * k + src.size] = src
            design[:, i * (k_max + 1) + k] = col
    target = np.zeros(rows, dtype=complex)
    target[:top + 1] = taylor
    sol, _, _, _ = np.linalg.lstsq(design, target, rcond=None)
    outers = []
    recomposed = np.zeros(N, dtype=complex)
    for i in range(r):
        c = np.zeros(N, dtype=complex)
        for k in range(k_max + 1):
            c[half + n * k] = sol[i * (k_max + 1) + k]
        fi = CircleFunction.from_coeffs(c)
        outers.append(fi)
        recomposed += inners[i].samples * fi.samples
    residual = float(np.sqrt(np.mean(np.abs(recomposed - f.samples) ** 2)))
    gram = _joint_gram_defect(grid(N) ** n, [J.samples for J in inners],
                              m_max_check)
    parseval = abs(norm2(f) ** 2 - sum(norm2(fi) ** 2 for fi in outers))
    return inners, outers, residual, gram, parseval, S


def n_inner_outer_factorize(f: CircleFunction, n: int,
                            k_max: Optional[int] = None,
                            method: str = "direct",
                            sv_threshold: float = 1e-6,
                            regularize: bool = False,
                            m_max_check: int = 8) -> NInnerOuterBundle:
    """Factor f into n-inner times n-outer parts.

    ``method`` selects the construction described in the module
    docstring; "direct" is exact for a single generator and is the
    default, "wandering" runs the shifted-span pipeline at truncation
    k_max (defaulting to 4 * top_index / n + 8).  The bundle records
    residual, joint orthonormality defect, and the component
    validations; a residual above 1e-6 raises FactorizationError.
    """
    _require_analytic(f, "n_inner_outer_factorize")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if norm2(f) < EPS_LOG:
        raise DomainError("cannot factor the zero function")
    if method == "direct":
        J, f1, residual, gram, parseval, n_work, tail = \
            _direct_n_factorization(f, n, regularize, m_max_check)
        inners = (J,)
        outers = (f1,)
        r = 1
        n_out = n_work
    elif method == "wandering":
        if k_max is None:
            k_max = 4 * f.top_index() // n + 8
        inners, outers, residual, gram, parseval, _ = \
            _wandering_n_factorization(f, n, k_max, sv_threshold,
                                       m_max_check)
        inners = tuple(inners)
        outers = tuple(outers)
        r = len(inners)
        n_out = f.n_samples
    else:
        raise ParameterError(f"unknown method {method!r}")
    inner_reports = tuple(
        is_B_inner(J, power_spec(n), m_max_check) for J in inners
    )
    outer_reports = []
    for fi in outers:
        try:
            outer_reports.append(is_n_outer(fi, n, regularize=regularize))
        except SingularityError:
            outer_reports.append(NOuterReport(
                passed=False, rank1_defect=float("inf"),
                outer_defect=float("inf")))
    bundle = NInnerOuterBundle(
        n=n, r=r, inners=inners, outers=outers, residual=residual,
        gram_defect=gram, method=method, n_samples=n_out,
        parseval_gap=parseval, outer_reports=tuple(outer_reports),
        inner_reports=inner_reports)
    if residual > TOL_FACTOR_RESIDUAL:
        raise FactorizationError(
            f"factorization residual {residual:.3e} exceeds "
            f"{TOL_FACTOR_RESIDUAL:g}",
            diagnostics={
                "residual": residual,
                "gram_defect": gram,
                "r": r,
                "method": method,
            })
    return bundle


def is_n_outer(f: CircleFunction, n: int, tol: float = TOL_B_INNER,
               regularize: bool = False) -> NOuterReport:
    """Test whether f is a degree-< n carrier polynomial times an outer
    series in z^n.

    The z^n splitting must be rank one across its components (checked
    against the largest component as pivot) and the shared base series
    must be outer.
    """
    _require_analytic(f, "is_n_outer")
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    parts = zn_series_components(f, n)
    norms = np.array([norm2(p) for p in parts])
    total = float(np.linalg.norm(norms))
    if total < EPS_LOG:
        raise DomainError("the zero function has no n-outer verdict")
    pivot = int(np.argmax(norms))
    sp = parts[pivot]
    sp_sq = norm2(sp) ** 2
    c = np.zeros(n, dtype=complex)
    worst = 0.0
    for i, p in enumerate(parts):
        ci = complex(np.vdot(sp.samples, p.samples) / f.n_samples) / sp_sq
        c[i] = ci
        diff = p.samples - ci * sp.samples
        worst = max(worst, float(np.sqrt(np.mean(np.abs(diff) ** 2))))
    rank1_defect = worst / total
    # Normalize the carrier: unit coefficient norm, first nonzero
    # coefficient positive real; the base series absorbs the factor.
    nu = float(np.linalg.norm(c))
    k0 = int(np.nonzero(np.abs(c) > 1e-12 * nu)[0][0])
    scale = nu * (c[k0] / abs(c[k0]))
    p_coeffs = c / scale
    half = f.n_samples // 2
    carrier_arr = np.zeros(f.n_samples, dtype=complex)
    carrier_arr[half:half + n] = p_coeffs
    carrier = CircleFunction.from_coeffs(carrier_arr)
    base = scale * sp
    outer_ok = False
    outer_defect = float("inf")
    if rank1_defect <= tol:
        rep = is_outer(base, regularize=regularize)
        outer_ok = rep.passed
        outer_defect = rep.defect
    return NOuterReport(passed=(rank1_defect <= tol and outer_ok),
                        rank1_defect=rank1_defect,
                        outer_defect=outer_defect,
                        carrier_polynomial=carrier,
                        base_series=base)


def outer_multiplier(f: CircleFunction, spec: Optional[BlaschkeSpec],
                     m_index: int) -> CircleFunction:
    """Analytic damping factor exp(-( |g|^(1/2) + i conj(|g|^(1/2)) )/m).

    g is f itself, or f composed with the Blaschke product when a spec
    is supplied (for arguments stored in base-variable form).  The
    output satisfies |q| <= 1 on the grid and tends to 1 as the index
    grows, uniformly at rate |g|^(1/2)/m.
    """
    if m_index < 1:
        raise ParameterError("m_index must be >= 1")
    _require_analytic(f, "outer_multiplier")
    g = compose(f, spec) if spec is not None else f
    root = np.sqrt(np.abs(g.samples))
    u = CircleFunction.from_samples(-root / m_index)
    conj_samples = harmonic_conjugate(u).samples.real
    return CircleFunction.from_samples(
        np.exp(u.samples.real + 1j * conj_samples))
