"""Rank-bounded constructions in matrix groups over finite fields.

Four builders live here.

  * prepare_near_root: given invertible y and (k, alpha) with k coprime to
    the characteristic, produce x agreeing with y on L = ker(y^k - alpha I)
    and the identity on a complement S, so that (x|_L)^k = alpha, x|_S = 1,
    and max(dim S, rank(x - y)) <= rank(y^k - alpha I).

  * approx_centralize: move an invertible phi to an invertible psi that
    commutes with x exactly, with rank(phi - psi) <= 2 k^2 r + 3 dim S
    where r = rank(x phi - phi x).  The algorithm refines the L/S split to
    W = im(x - 1) and S' = ker(x - 1) (x is semisimple because T^k - alpha
    and T - 1 are squarefree away from the characteristic), projects phi to
    block-diagonal form over W + S' (cost <= 2r, since x - 1 is invertible
    on W), averages the W block over conjugation by x (cost <= k(k-1)r/2),
    and repairs invertibility inside the commutant by a correction whose
    rank equals the accumulated nullity.  Total cost <= (k^2 - k + 4) r,
    so the contractual bound can never trip; it is still asserted, and a
    violation raises BoundViolationError with a reproducer payload.

  * build_niceblock: the order-p element [[I, I], [0, I]] of SL_2n or Sp_2n
    whose projective rank length is exactly 1/2, together with generators
    of the abelian normal subgroup A = {[[I, B], [0, I]]} of its
    centralizer, block-diagonal generators H commuting with it, and
    witnesses: an element of A of length 1/2, an element of H of length
    (n-1)/n, and a commutator [u, h] of length at least (1/3)(1 - 2/n).

  * project_to_sl / commutator_witness: determinant-one projection moving
    a single column (rank cost <= 1), and exhaustive commutator witnesses
    in small enumerated groups.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import BoundViolationError, BudgetError, MsgLabError
from .groups import (SL, SP, ClassicalElement, Permutation, psl_canonical,
                     standard_symplectic_form)
from .linalg import Matrix, min_rank_shift, primary_blocks


@dataclass(frozen=True)
class SplitDecomposition:
    """A splitting V = L + S with the exponent data (k, alpha).

    L_basis and S_basis are tuples of column vectors (n x 1 matrices)
    that together form a basis of the space; k is coprime to the
    characteristic and alpha is a nonzero packed field element.
    """

    L_basis: tuple
    S_basis: tuple
    k: int
    alpha: int

    def __post_init__(self):
        object.__setattr__(self, "L_basis", tuple(self.L_basis))
        object.__setattr__(self, "S_basis", tuple(self.S_basis))
        combined = self.L_basis + self.S_basis
        if not combined:
            raise ValueError("empty decomposition")
        field = combined[0].field
        n = combined[0].nrows
        for v in combined:
            if v.field != field or v.shape != (n, 1):
                raise ValueError("basis vectors must be columns over one field")
        if self.k < 1:
            raise ValueError("k must be positive")
        if math.gcd(self.k, field.p) != 1:
            raise ValueError("k must be coprime to the characteristic")
        if self.alpha == field.zero:
            raise ValueError("alpha must be nonzero")
        if len(combined) != n:
            raise ValueError("L and S do not fill the space")
        if not self.basis().is_invertible():
            raise ValueError("L and S columns are not a basis")

    @property
    def field(self):
        return (self.L_basis + self.S_basis)[0].field

    @property
    def n(self):
        return (self.L_basis + self.S_basis)[0].nrows

    @property
    def dim_L(self):
        return len(self.L_basis)

    @property
    def dim_S(self):
        return len(self.S_basis)

    def L_matrix(self):
        if self.L_basis:
            return Matrix.hstack(self.L_basis)
        return Matrix.zeros(self.field, self.n, 0)

    def S_matrix(self):
        if self.S_basis:
            return Matrix.hstack(self.S_basis)
        return Matrix.zeros(self.field, self.n, 0)

    def basis(self):
        return Matrix.hstack([self.L_matrix(), self.S_matrix()])


def _std_vector(field, n, i):
    col = np.zeros((n, 1), dtype=np.int64)
    col[i, 0] = 1
    return Matrix.from_packed(field, col)


def _complete_basis(cols):
    """Standard basis vectors, lowest index first, that extend the span of
    the given columns to the whole space.  Returns an n x (n - rank) matrix."""
    field = cols.field
    n = cols.nrows
    current = cols
    added = []
    rank = current.rank()
    for i in range(n):
        if rank == n:
            break
        e = _std_vector(field, n, i)
        cand = Matrix.hstack([current, e])
        if cand.rank() > rank:
            current = cand
            rank += 1
            added.append(e)
    if added:
        return Matrix.hstack(added)
    return Matrix.zeros(field, n, 0)


def prepare_near_root(y, k, alpha):
    """Adjust y on the kernel complement of y^k - alpha I.

    Returns (x, dec) with x = y on L = ker(y^k - alpha I), x = 1 on the
    complement S completed from standard basis vectors; all the stated
    rank bounds follow because x - y vanishes on L and dim S equals
    rank(y^k - alpha I) exactly.
    """
    field = y.field
    n = y.nrows
    if y.ncols != n:
        raise ValueError("y must be square")
    if not y.is_invertible():
        raise ValueError("y must be invertible")
    if k < 1 or math.gcd(k, field.p) != 1:
        raise ValueError("k must be positive and coprime to the characteristic")
    if alpha == field.zero:
        raise ValueError("alpha must be nonzero")

    defect = y.matpow(k) - Matrix.scalar(field, n, alpha)
    r = defect.rank()
    kerl = defect.kernel_basis()
    L = Matrix.hstack(kerl) if kerl else Matrix.zeros(field, n, 0)
    S = _complete_basis(L)
    P = Matrix.hstack([L, S])
    x = Matrix.hstack([y @ L, S]) @ P.inverse()

    dec = SplitDecomposition(tuple(kerl), tuple(S.columns()), k, alpha)
    # exact postconditions; cheap at these sizes
    assert dec.dim_S == r
    assert (x - y).rank() <= r
    check_split_condition(x, dec)
    return x, dec


def check_split_condition(x, dec):
    """Raise ValueError unless x preserves L, is the identity on S, and
    satisfies (x restricted to L)^k = alpha * identity."""
    field = x.field
    n = x.nrows
    if dec.n != n or dec.field != field:
        raise ValueError("decomposition does not match the matrix")
    P = dec.basis()
    C = P.inverse() @ x @ P
    dl = dec.dim_L
    if C.block(dl, n, 0, dl) != Matrix.zeros(field, dec.dim_S, dl):
        raise ValueError("x does not preserve L")
    s_cols = C.block(0, n, dl, n)
    expect = Matrix.vstack([
        Matrix.zeros(field, dl, dec.dim_S),
        Matrix.identity(field, dec.dim_S),
    ]) if dec.dim_S else s_cols
    if dec.dim_S and s_cols != expect:
        raise ValueError("x is not the identity on S")
    xl = C.block(0, dl, 0, dl)
    if dl and xl.matpow(dec.k) != Matrix.scalar(field, dl, dec.alpha):
        raise ValueError("x restricted to L is not a k-th root of alpha")


def _module_generators(x_f, span_cols, deg):
    """Greedy generators of a submodule given by spanning columns: vectors
    whose x-orbits (length deg) concatenate to a basis of the span."""
    field = x_f.field
    m = x_f.nrows
    gens = []
    orbit_cols = []
    current = Matrix.zeros(field, m, 0)
    for j in range(span_cols.ncols):
        v = span_cols.col(j)
        cand = Matrix.hstack([current, v])
        if cand.rank() == current.rank():
            continue
        gens.append(v)
        orbit = [v]
        for _ in range(deg - 1):
            orbit.append(x_f @ orbit[-1])
        orbit_m = Matrix.hstack(orbit)
        current = Matrix.hstack([current, orbit_m])
        orbit_cols.append(orbit_m)
        assert current.rank() == current.ncols
    return gens, orbit_cols, current


def _invariant_complement(x_f, sub_cols, deg):
    """An x-invariant complement of the given submodule, as concatenated
    x-orbits of standard basis vectors (greedy, lowest index first)."""
    field = x_f.field
    m = x_f.nrows
    current = sub_cols
    orbit_cols = []
    gens = []
    for i in range(m):
        if current.rank() == m:
            break
        e = _std_vector(field, m, i)
        if Matrix.hstack([current, e]).rank() == current.rank():
            continue
        orbit = [e]
        for _ in range(deg - 1):
            orbit.append(x_f @ orbit[-1])
        orbit_m = Matrix.hstack(orbit)
        grown = Matrix.hstack([current, orbit_m])
        # a simple module not inside the span meets it trivially
        assert grown.rank() == current.rank() + deg
        current = grown
        gens.append(e)
        orbit_cols.append(orbit_m)
    if orbit_cols:
        return gens, Matrix.hstack(orbit_cols)
    return gens, Matrix.zeros(field, m, 0)


def _repair_block(x_f, a_f, deg):
    """Rank-nullity correction R commuting with x_f making a_f + R
    invertible, inside one primary component (x_f has squarefree minimal
    polynomial equal to a single irreducible of degree deg)."""
    field = a_f.field
    m = a_f.nrows
    kerl = a_f.kernel_basis()
    if not kerl:
        return Matrix.zeros(field, m, m)
    ker_span = Matrix.hstack(kerl)
    # image and an invariant complement of it (target of the correction)
    _, im_pivots = a_f.rref()
    im_cols = a_f.take_columns(im_pivots)
    _, compl_of_image = _invariant_complement(x_f, im_cols, deg)
    # module bases: orbits of greedy generators
    kgens, korbits, kdom = _module_generators(x_f, ker_span, deg)
    assert kdom.ncols == ker_span.ncols == compl_of_image.ncols
    assert len(korbits) * deg == kdom.ncols
    # send the i-th kernel orbit onto the i-th complement orbit and kill an
    # invariant complement of the kernel
    _, rest = _invariant_complement(x_f, kdom, deg)
    domain = Matrix.hstack([kdom, rest])
    image = Matrix.hstack([compl_of_image,
                           Matrix.zeros(field, m, rest.ncols)])
    R = image @ domain.inverse()
    assert R.rank() == kdom.ncols
    assert R @ x_f == x_f @ R
    return R


def approx_centralize(x, dec, phi):
    """Nearest-by-construction invertible psi with x psi = psi x.

    See the module docstring for the three-step construction and the
    accounting that keeps rank(phi - psi) within 2 k^2 r + 3 dim S.
    """
    field = x.field
    n = x.nrows
    check_split_condition(x, dec)
    if phi.shape != (n, n) or phi.field != field:
        raise ValueError("phi does not match x")
    if not phi.is_invertible():
        raise ValueError("phi must be invertible")
    k = dec.k
    commutator_rank = (x @ phi - phi @ x).rank()
    if commutator_rank == 0:
        return phi

    ident = Matrix.identity(field, n)
    b = x - ident
    _, b_pivots = b.rref()
    w_cols = b.take_columns(b_pivots)           # W = im(x - 1)
    s_list = b.kernel_basis()                    # S' = ker(x - 1)
    s_cols = Matrix.hstack(s_list) if s_list else Matrix.zeros(field, n, 0)
    m = w_cols.ncols
    P = Matrix.hstack([w_cols, s_cols])
    Pinv = P.inverse()

    C = Pinv @ x @ P
    x_w = C.block(0, m, 0, m)
    assert C.block(0, m, m, n) == Matrix.zeros(field, m, n - m)
    assert C.block(m, n, 0, m) == Matrix.zeros(field, n - m, m)
    assert C.block(m, n, m, n) == Matrix.identity(field, n - m)

    F = Pinv @ phi @ P
    f_ww = F.block(0, m, 0, m)
    f_ss = F.block(m, n, m, n)

    # (a) drop the off-diagonal blocks: x - 1 is invertible on W, so their
    # ranks are bounded by the commutator rank
    # (b) average the W block over conjugation by x_w (order divides k)
    inv_k = field.inv(k % field.p)
    x_w_inv = x_w.inverse()
    a_bar = Matrix.zeros(field, m, m)
    left = Matrix.identity(field, m)
    right = Matrix.identity(field, m)
    for _ in range(k):
        a_bar = a_bar + left @ f_ww @ right
        left = left @ x_w_inv
        right = right @ x_w
    a_bar = a_bar.scale(inv_k)
    assert a_bar @ x_w == x_w @ a_bar

    # (c) repair invertibility inside the commutant, one primary component
    # of x_w at a time (module-level corrections, rank = nullity)
    if m:
        blocks = primary_blocks(x_w, k, dec.alpha)
        prim = Matrix.hstack([basis for _, basis in blocks])
        prim_inv = prim.inverse()
        cx = prim_inv @ x_w @ prim
        ca = prim_inv @ a_bar @ prim
        repaired = []
        offset = 0
        for f, basis in blocks:
            d = basis.ncols
            deg = len(f) - 1
            x_f = cx.block(offset, offset + d, offset, offset + d)
            a_f = ca.block(offset, offset + d, offset, offset + d)
            repaired.append(a_f + _repair_block(x_f, a_f, deg))
            offset += d
        fixed_w = prim @ _block_diagonal(field, repaired) @ prim_inv
    else:
        fixed_w = a_bar

    fixed_s = f_ss + _plain_repair(f_ss)

    psi_coords = Matrix.block2(
        fixed_w, Matrix.zeros(field, m, n - m),
        Matrix.zeros(field, n - m, m), fixed_s)
    psi = P @ psi_coords @ Pinv

    if not psi.is_invertible():
        raise AssertionError("repair failed to restore invertibility")
    if x @ psi != psi @ x:
        raise AssertionError("psi does not commute after averaging")
    achieved = (phi - psi).rank()
    bound = 2 * k * k * commutator_rank + 3 * dec.dim_S
    if achieved > bound:
        raise BoundViolationError(
            "rank(phi - psi) = %d exceeds 2k^2 r + 3 dim S = %d"
            % (achieved, bound),
            payload={
                "field": (field.p, field.e, field.spec.modulus),
                "x": x.packed().tolist(),
                "phi": phi.packed().tolist(),
                "k": k,
                "alpha": dec.alpha,
                "dim_S": dec.dim_S,
                "commutator_rank": commutator_rank,
                "achieved": achieved,
                "bound": bound,
            },
        )
    return psi


def _block_diagonal(field, mats):
    total = sum(b.nrows for b in mats)
    out = np.zeros((total, total, field.e), dtype=field.np_dtype)
    at = 0
    for b in mats:
        out[at:at + b.nrows, at:at + b.ncols, :] = b.data
        at += b.nrows
    return Matrix(field, out)


def _plain_repair(a):
    """Rank-nullity correction making a square matrix invertible, with no
    commutation constraint (used where x acts as the identity)."""
    field = a.field
    m = a.nrows
    kerl = a.kernel_basis()
    if not kerl:
        return Matrix.zeros(field, m, m)
    ker_span = Matrix.hstack(kerl)
    _, im_pivots = a.rref()
    im_cols = a.take_columns(im_pivots)
    compl = _complete_basis(im_cols)
    assert compl.ncols == ker_span.ncols
    rest = _complete_basis(ker_span)
    domain = Matrix.hstack([ker_span, rest])
    image = Matrix.hstack([compl, Matrix.zeros(field, m, rest.ncols)])
    return image @ domain.inverse()


# -- the order-p upper block element ---------------------------------------


@dataclass(frozen=True)
class NiceblockCertificate:
    """The block element with its centralizer generators and witnesses."""

    x: ClassicalElement
    A_generators: tuple
    H_generators: tuple
    witness_u: ClassicalElement
    witness_h: ClassicalElement
    commutator_u: ClassicalElement
    commutator_h: ClassicalElement
    commutator_length: Fraction

    @property
    def half_size(self):
        return self.x.n // 2


def _upper_block(field, b, tag, form):
    n = b.nrows
    m = Matrix.block2(Matrix.identity(field, n), b,
                      Matrix.zeros(field, n, n), Matrix.identity(field, n))
    return ClassicalElement(m, tag, form)


def _double_block(field, p_mat, tag, form):
    n = p_mat.nrows
    m = Matrix.block2(p_mat, Matrix.zeros(field, n, n),
                      Matrix.zeros(field, n, n), p_mat)
    return ClassicalElement(m, tag, form)


def _perm_matrix(field, images):
    n = len(images)
    arr = np.zeros((n, n), dtype=np.int64)
    for j, i in enumerate(images):
        arr[i, j] = 1
    return Matrix.from_packed(field, arr)


def _shift_matrix(field, n):
    return _perm_matrix(field, [(j + 1) % n for j in range(n)])


def _unit_matrix(field, n, i, j, value=1):
    arr = np.zeros((n, n), dtype=np.int64)
    arr[i, j] = value
    return Matrix.from_packed(field, arr)


def length_pr(m):
    """Projective rank length as an exact fraction."""
    n = m.nrows
    ident = Matrix.identity(m.field, n)
    return Fraction(min_rank_shift(m, ident).r, n)


def build_niceblock(n, spec, group, seed=0):
    """Certificate for x = [[I_n, I_n], [0, I_n]] in SL_2n or Sp_2n.

    The A-generators span the full abelian group {[[I, B], [0, I]]} with B
    arbitrary (SL) or symmetric (Sp).  The H-generators are block-doubled
    transvections plus the cyclic shift (SL), or block-doubled signed
    permutations (Sp, orthogonal so the double is symplectic).  The default
    commutator pair uses B = diag(0, 1, ..., n-1 mod q) against the shift,
    whose commutator is diagonal of rank n or n - 1, always meeting the
    (1/3)(1 - 2/n) target; a seeded randomized search is kept as a fallback
    and errors out with diagnostics after 10^4 failed trials.
    """
    from .gf import FieldSpec, field_arith

    field = field_arith(spec) if isinstance(spec, FieldSpec) else spec
    if n < 2:
        raise ValueError("need n >= 2")
    if group not in (SL, SP):
        raise ValueError("group must be SL or SP")
    q = field.q
    form = standard_symplectic_form(field, 2 * n) if group == SP else None

    x = _upper_block(field, Matrix.identity(field, n), group, form)

    a_gens = []
    if group == SL:
        for i in range(n):
            for j in range(n):
                a_gens.append(_upper_block(field, _unit_matrix(field, n, i, j),
                                           group, form))
    else:
        for i in range(n):
            a_gens.append(_upper_block(field, _unit_matrix(field, n, i, i),
                                       group, form))
        for i in range(n):
            for j in range(i + 1, n):
                sym = _unit_matrix(field, n, i, j) + _unit_matrix(field, n, j, i)
                a_gens.append(_upper_block(field, sym, group, form))

    shift = _shift_matrix(field, n)
    h_gens = []
    if group == SL:
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for lam in field.nonzero_elements():
                    t = Matrix.identity(field, n) + _unit_matrix(field, n, i, j, lam)
                    h_gens.append(_double_block(field, t, group, form))
        h_gens.append(_double_block(field, shift, group, form))
    else:
        for i in range(n - 1):
            images = list(range(n))
            images[i], images[i + 1] = images[i + 1], images[i]
            h_gens.append(_double_block(field, _perm_matrix(field, images),
                                        group, form))
        if field.p != 2:
            minus = field.neg(field.one)
            for i in range(n):
                d = [field.one] * n
                d[i] = minus
                h_gens.append(_double_block(field, Matrix.diagonal(field, d),
                                            group, form))

    witness_u = x
    witness_h = _double_block(field, shift, group, form)

    comm_u, comm_h, comm_len = _commutator_pair(field, n, group, form, shift)
    target = Fraction(1, 3) * (1 - Fraction(2, n))
    if comm_len < target:
        comm_u, comm_h, comm_len = _commutator_search(
            field, n, group, form, target, seed)

    cert = NiceblockCertificate(
        x=x,
        A_generators=tuple(a_gens),
        H_generators=tuple(h_gens),
        witness_u=witness_u,
        witness_h=witness_h,
        commutator_u=comm_u,
        commutator_h=comm_h,
        commutator_length=comm_len,
    )
    _validate_niceblock(cert, field)
    return cert


def _commutator_pair(field, n, group, form, p_mat):
    diag = [(i % field.q) for i in range(n)]
    b = Matrix.diagonal(field, diag)
    u = _upper_block(field, b, group, form)
    h = _double_block(field, p_mat, group, form)
    comm = (u.inverse() * h.inverse() * u * h).matrix
    return u, h, length_pr(comm)


def _commutator_search(field, n, group, form, target, seed):
    import random as _random

    rng = _random.Random(seed)
    best = None
    for _ in range(10**4):
        diag = [rng.randrange(field.q) for _ in range(n)]
        images = list(range(n))
        rng.shuffle(images)
        p_mat = _perm_matrix(field, images)
        b = Matrix.diagonal(field, diag)
        u = _upper_block(field, b, group, form)
        h = _double_block(field, p_mat, group, form)
        comm = (u.inverse() * h.inverse() * u * h).matrix
        ell = length_pr(comm)
        if best is None or ell > best[2]:
            best = (u, h, ell)
        if ell >= target:
            return u, h, ell
    raise MsgLabError(
        "no commutator pair reached length %s after 10^4 trials; best %s"
        % (target, best[2]))


def _validate_niceblock(cert, field):
    x = cert.x.matrix
    p = field.p
    n2 = x.nrows
    ident = Matrix.identity(field, n2)
    assert x.matpow(p) == ident
    assert length_pr(x) == Fraction(1, 2)
    for g in cert.A_generators:
        assert g.matrix @ x == x @ g.matrix
        assert g.matrix.matpow(p) == ident
    for h in cert.H_generators:
        assert h.matrix @ x == x @ h.matrix
    for a, b in zip(cert.A_generators[:3], cert.A_generators[1:4]):
        assert a.matrix @ b.matrix == b.matrix @ a.matrix


# -- determinant-one projection and commutator witnesses -------------------


def project_to_sl(g):
    """Scale the first column by det(g)^-1: the result has determinant one
    and differs from g in rank at most one."""
    m = g.matrix if isinstance(g, ClassicalElement) else g
    field = m.field
    d = m.det()
    if d == field.zero:
        raise ValueError("input must be invertible")
    if d == field.one:
        return ClassicalElement(m, SL)
    dinv = field.inv(d)
    n = m.nrows
    rows = [[m.entry(r, c) for c in range(n)] for r in range(n)]
    for r in range(n):
        rows[r][0] = field.mul(rows[r][0], dinv)
    fixed = Matrix.from_packed(field, rows)
    assert (fixed - m).rank() <= 1
    return ClassicalElement(fixed, SL)


def _element_ops(sample):
    if isinstance(sample, Permutation):
        return (lambda a, b: a * b,
                lambda a: a.inverse(),
                lambda a: a.images)
    if isinstance(sample, ClassicalElement):
        if sample.group_tag == "PSL_REP":
            return (lambda a, b: a * b,
                    lambda a: a.inverse(),
                    lambda a: psl_canonical(a.matrix).key())
        return (lambda a, b: a * b,
                lambda a: a.inverse(),
                lambda a: a.matrix.key())
    if isinstance(sample, Matrix):
        return (lambda a, b: a @ b,
                lambda a: a.inverse(),
                lambda a: a.key())
    raise TypeError("unsupported element type %r" % type(sample))


def commutator_witness_table(elements, key_fn=None):
    """First witness pair (a, b) with a^-1 b^-1 a b = g, for every value g
    realized as a commutator over the enumeration.  Exhaustive."""
    if len(elements) > 10**4:
        raise BudgetError("enumeration of %d elements exceeds the 10^4 budget"
                          % len(elements))
    mul, inv, key = _element_ops(elements[0])
    if key_fn is not None:
        key = key_fn
    inverses = [inv(a) for a in elements]
    table = {}
    for i, a in enumerate(elements):
        ai = inverses[i]
        for j, b in enumerate(elements):
            g = mul(mul(ai, inverses[j]), mul(a, b))
            gk = key(g)
            if gk not in table:
                table[gk] = (a, b)
    return table


def commutator_witness(g, elements, key_fn=None, table=None):
    """An exact witness (a, b) with g = a^-1 b^-1 a b, or None after an
    exhaustive scan of the enumeration."""
    mul, inv, key = _element_ops(g)
    if key_fn is not None:
        key = key_fn
    if table is None:
        table = commutator_witness_table(elements, key_fn=key_fn)
    return table.get(key(g))
