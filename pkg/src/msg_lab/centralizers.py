"""Structure of centralizers: block factorizations and growth fingerprints.

For a matrix x with the split structure of prepare_near_root, the
centralizer of x is the product of general linear groups over extension
fields, one per irreducible factor of T^k - alpha acting on L, with the
eigenvalue-1 block absorbing S.  For permutations the centralizer is a
product of wreath products C_k wr S_{m_k} over the cycle lengths.  The
fingerprint record distinguishes elements whose centralizer carries a
large normal elementary abelian p-subgroup (the block element in
characteristic p, permutations with many p-cycles) from semisimple
elements whose centralizer is a plain product of linear blocks.
"""

import math
from dataclasses import dataclass

from .constructions import (NiceblockCertificate, SplitDecomposition,
                            check_split_condition)
from .errors import UnsupportedCaseError
from .groups import SL, ClassicalElement, Permutation
from .linalg import Matrix, primary_blocks
from .metrics import gl_order

GL_BLOCK = "GL-block"
WREATH_BLOCK = "wreath-block"
P_CORE = "abelian-p-core"


@dataclass(frozen=True)
class FactorRecord:
    """One factor of a centralizer.

    GL-block: GL_dim over the extension of degree ext_degree.
    wreath-block: C_ext wr S_dim (dim = multiplicity, ext = cycle length).
    abelian-p-core: elementary abelian of rank dim built from ext = p.
    """

    kind: str
    dim: int
    ext_degree: int
    order: int

    def format_line(self):
        return "%s %d %d %d" % (self.kind, self.dim, self.ext_degree,
                                self.order)


@dataclass(frozen=True)
class PrimeOrderCentralizerShape:
    """The (base x| top) x fixed shape for a prime-order permutation:
    centralizer = (C_p^cycle_count semidirect S_cycle_count) x S_fixed."""

    p: int
    cycle_count: int
    fixed_points: int
    base_order: int
    top_order: int
    fixed_order: int
    fixed_trivial: bool


@dataclass(frozen=True)
class CentralizerDescriptor:
    factors: tuple
    total_order: int
    p_core_order: int = 1
    prime_shape: PrimeOrderCentralizerShape | None = None

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple(self.factors))
        prod = self.p_core_order
        for f in self.factors:
            prod *= f.order
        if prod != self.total_order:
            raise ValueError("factor orders do not multiply to total_order")

    def format_lines(self):
        return [f.format_line() for f in self.factors]


@dataclass(frozen=True)
class FingerprintRecord:
    has_large_p_core: bool
    p: int
    p_core_order: int
    reductive_part: CentralizerDescriptor


def centralizer_factorization(x, dec):
    """Factor the centralizer of x into linear blocks.

    One GL-block per distinct irreducible factor of T^k - alpha with a
    nonzero kernel, plus the T - 1 block; when alpha = 1 the eigenvalue-1
    part of L and the complement S merge into a single block, so the
    total order always equals the brute-force count of invertible
    commuting matrices.  The factor count is at most k + 1.
    """
    check_split_condition(x, dec)
    field = x.field
    q = field.q
    blocks = primary_blocks(x, dec.k, dec.alpha)
    factors = []
    for f, basis in blocks:
        deg = len(f) - 1
        dim = basis.ncols
        if dim % deg != 0:
            raise AssertionError("primary block dimension not divisible by "
                                 "the factor degree")
        d = dim // deg
        factors.append(FactorRecord(GL_BLOCK, d, deg, gl_order(d, q ** deg)))
    if len(factors) > dec.k + 1:
        raise AssertionError("more than k + 1 centralizer factors")
    total = 1
    for f in factors:
        total *= f.order
    return CentralizerDescriptor(tuple(factors), total)


def perm_centralizer_structure(sigma, n=None):
    """Wreath-product factorization of a permutation centralizer in S_n.

    One factor C_k wr S_{m_k} per cycle length k with multiplicity m_k
    (fixed points give the k = 1 factor S_f).  For prime-order sigma the
    descriptor also carries the base/top/fixed shape record.
    """
    if not isinstance(sigma, Permutation):
        raise TypeError("expected a Permutation")
    if n is not None and n != sigma.n:
        raise ValueError("n does not match the permutation degree")
    n = sigma.n
    mult = {}
    for c in sigma.cycles(include_fixed=True):
        mult[len(c)] = mult.get(len(c), 0) + 1
    factors = []
    total = 1
    for k in sorted(mult):
        m = mult[k]
        order = (k ** m) * math.factorial(m)
        factors.append(FactorRecord(WREATH_BLOCK, m, k, order))
        total *= order

    shape = None
    o = sigma.order()
    if o > 1 and _is_prime(o):
        p = o
        m_p = mult.get(p, 0)
        f = mult.get(1, 0)
        shape = PrimeOrderCentralizerShape(
            p=p,
            cycle_count=m_p,
            fixed_points=f,
            base_order=p ** m_p,
            top_order=math.factorial(m_p),
            fixed_order=math.factorial(f),
            fixed_trivial=f <= 1,
        )
    return CentralizerDescriptor(tuple(factors), total, prime_shape=shape)


def _is_prime(m):
    if m < 2:
        return False
    for d in range(2, int(math.isqrt(m)) + 1):
        if m % d == 0:
            return False
    return True


def characteristic_fingerprint(x, context=None):
    """Large-p-core dichotomy data for a prime-order element.

    Three supported shapes, selected by the context argument:

      * SplitDecomposition: semisimple x of prime order k != char built by
        prepare_near_root with alpha = 1; no p-core, reductive part is the
        full block factorization.
      * NiceblockCertificate: the order-p block element in its own
        characteristic; p-core is the abelian group A (order q^dim A),
        reductive part records the ambient GL_n the block-diagonal
        complement lives in.
      * None with x a Permutation of prime order p: p-core is the base
        C_p^m of the wreath factor, reductive part is the top S_m times
        the fixed-point S_f.

    Anything else raises UnsupportedCaseError.
    """
    if isinstance(context, SplitDecomposition):
        return _fingerprint_semisimple(x, context)
    if isinstance(context, NiceblockCertificate):
        return _fingerprint_niceblock(x, context)
    if context is None and isinstance(x, Permutation):
        return _fingerprint_permutation(x)
    raise UnsupportedCaseError(
        "fingerprint supports semisimple split elements, the block element "
        "with its certificate, and prime-order permutations; got context %r"
        % type(context).__name__)


def _fingerprint_semisimple(x, dec):
    field = x.field
    p = dec.k
    if not _is_prime(p):
        raise UnsupportedCaseError("order %d is not prime" % p)
    if p == field.p:
        raise UnsupportedCaseError(
            "semisimple family requires the order to differ from the "
            "characteristic")
    if dec.alpha != field.one:
        raise UnsupportedCaseError("semisimple family requires alpha = 1")
    n = x.nrows
    ident = Matrix.identity(field, n)
    if x == ident:
        raise UnsupportedCaseError("x must have order exactly p")
    if x.matpow(p) != ident:
        raise UnsupportedCaseError("x^p is not the identity")
    reductive = centralizer_factorization(x, dec)
    return FingerprintRecord(
        has_large_p_core=False,
        p=p,
        p_core_order=1,
        reductive_part=reductive,
    )


def _fingerprint_niceblock(x, cert):
    mat = x.matrix if isinstance(x, ClassicalElement) else x
    if mat != cert.x.matrix:
        raise UnsupportedCaseError(
            "x does not match the certified block element")
    field = mat.field
    p = field.p
    n = cert.half_size
    core_rank = len(cert.A_generators)
    expected = n * n if cert.x.group_tag == SL else n * (n + 1) // 2
    assert core_rank == expected
    reductive = CentralizerDescriptor(
        (FactorRecord(GL_BLOCK, n, 1, gl_order(n, field.q)),),
        gl_order(n, field.q))
    return FingerprintRecord(
        has_large_p_core=True,
        p=p,
        p_core_order=field.q ** core_rank,
        reductive_part=reductive,
    )


def _fingerprint_permutation(sigma):
    o = sigma.order()
    if not _is_prime(o):
        raise UnsupportedCaseError(
            "permutation fingerprint needs prime order, got %d" % o)
    desc = perm_centralizer_structure(sigma)
    shape = desc.prime_shape
    factors = [
        FactorRecord(WREATH_BLOCK, shape.cycle_count, 1, shape.top_order),
        FactorRecord(WREATH_BLOCK, shape.fixed_points, 1, shape.fixed_order),
    ]
    reductive = CentralizerDescriptor(
        tuple(factors), shape.top_order * shape.fixed_order)
    return FingerprintRecord(
        has_large_p_core=True,
        p=shape.p,
        p_core_order=shape.base_order,
        reductive_part=reductive,
    )
