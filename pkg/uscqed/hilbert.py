"""Operators on the composite cavity and two-level-atom Hilbert space.

A `SpaceLayout` lists the tensor factors of the space in the canonical
order ``cavity, atom_a, atom_b, sensor``. An `Operator` is a dense
complex matrix tagged with the layout it acts on; it is immutable, so
operators can be shared freely between threads.

Two-level factors use the basis ``(|g>, |e>)``, so that
``sigma_z = sigma_plus sigma_minus - sigma_minus sigma_plus`` has the
eigenvalue ``+1`` on the excited state.

Example:
    >>> layout = SpaceLayout.build(2, atoms=())
    >>> annihilation(layout).data.real.tolist()
    [[0.0, 1.0], [0.0, 0.0]]

"""

from __future__ import absolute_import, division, unicode_literals

import typing

import functools
import numbers

import numpy
import scipy.linalg

from . import errors
from ._repr import make_repr
from .constants import HERMITIAN_TOLERANCE
from .enums import Factor

if typing.TYPE_CHECKING:
    from typing import Callable, Iterable, List, Sequence, Text, Tuple, Union

    FactorLike = Union[Factor, Text]


__all__ = [
    "Operator",
    "SpaceLayout",
    "annihilation",
    "bare_excitations",
    "embed",
    "embed_product",
    "identity",
    "number",
    "operator_function",
    "pauli",
]

_CANONICAL_ORDER = list(Factor)

SIGMA_PLUS = numpy.array([[0, 0], [1, 0]], dtype=complex)
SIGMA_MINUS = numpy.array([[0, 1], [0, 0]], dtype=complex)
_PAULI = {
    "plus": SIGMA_PLUS,
    "minus": SIGMA_MINUS,
    "x": SIGMA_PLUS + SIGMA_MINUS,
    "y": 1j * (SIGMA_MINUS - SIGMA_PLUS),
    "z": SIGMA_PLUS @ SIGMA_MINUS - SIGMA_MINUS @ SIGMA_PLUS,
}
for _matrix in _PAULI.values():
    _matrix.flags.writeable = False


def _as_factor(label, path="layout"):
    # type: (FactorLike, Text) -> Factor
    try:
        return label if isinstance(label, Factor) else Factor(label)
    except ValueError:
        raise errors.LayoutError.single(
            path, "unknown factor label {!r}, expected one of {}".format(
                label, ", ".join(Factor.choices())
            )
        )


class SpaceLayout(object):
    """Ordered tensor factors of a composite Hilbert space.

    Arguments:
        factors (list): ``(label, dim)`` pairs in canonical order.

    Raises:
        ~uscqed.errors.LayoutError: if a label is unknown or repeated,
            the order is not canonical, or a dimension is invalid.

    """

    __slots__ = ("factors",)

    def __init__(self, factors):
        # type: (Iterable[Tuple[FactorLike, int]]) -> None
        checked = []  # type: List[Tuple[Factor, int]]
        for label, dim in factors:
            factor = _as_factor(label)
            if any(factor is seen for seen, _ in checked):
                raise errors.LayoutError.single(
                    "layout.{}".format(factor), "factor listed more than once"
                )
            if factor is Factor.cavity and dim < 2:
                raise errors.LayoutError.single(
                    "layout.cavity", "N_fock must be >= 2, got {}".format(dim)
                )
            if factor is not Factor.cavity and dim != 2:
                raise errors.LayoutError.single(
                    "layout.{}".format(factor), "atomic factors have dimension 2"
                )
            checked.append((factor, int(dim)))
        order = [_CANONICAL_ORDER.index(factor) for factor, _ in checked]
        if order != sorted(order):
            raise errors.LayoutError.single(
                "layout", "factors must follow the order cavity, atom_a, atom_b, sensor"
            )
        self.factors = tuple(checked)

    @classmethod
    def build(cls, n_fock, atoms=(Factor.atom_a,)):
        # type: (int, Sequence[FactorLike]) -> SpaceLayout
        """Build a layout with a cavity and the given atomic factors."""
        factors = [(Factor.cavity, n_fock)]
        factors.extend((_as_factor(atom), 2) for atom in atoms)
        factors.sort(key=lambda item: _CANONICAL_ORDER.index(item[0]))
        return cls(factors)

    def __repr__(self):
        return make_repr(
            "SpaceLayout", [(str(label), dim) for label, dim in self.factors]
        )

    def __eq__(self, other):
        return isinstance(other, SpaceLayout) and self.factors == other.factors

    def __ne__(self, other):
        return not self == other

    def __hash__(self):
        return hash(self.factors)

    def __contains__(self, label):
        try:
            factor = _as_factor(label)
        except errors.LayoutError:
            return False
        return factor in self.labels

    @property
    def labels(self):
        # type: () -> Tuple[Factor, ...]
        """`tuple`: the factor labels in order."""
        return tuple(label for label, _ in self.factors)

    @property
    def total_dim(self):
        # type: () -> int
        """`int`: the dimension of the full space."""
        return int(numpy.prod([dim for _, dim in self.factors]))

    @property
    def n_fock(self):
        # type: () -> int
        """`int`: the cavity truncation."""
        return self.dim(Factor.cavity)

    @property
    def atoms(self):
        # type: () -> Tuple[Factor, ...]
        """`tuple`: the two-level factors in order."""
        return tuple(label for label in self.labels if label is not Factor.cavity)

    def dim(self, label):
        # type: (FactorLike) -> int
        """Get the dimension of a factor."""
        factor = _as_factor(label)
        for name, dim in self.factors:
            if name is factor:
                return dim
        raise errors.LayoutError.single(
            "layout.{}".format(factor), "factor not present in {!r}".format(self)
        )


class Operator(object):
    """A dense complex matrix acting on a `SpaceLayout`.

    Arguments:
        layout (SpaceLayout): the space the operator acts on.
        data (array_like): a ``total_dim x total_dim`` matrix, copied.
        hermitian (bool): if `True`, verify Hermiticity on construction.

    """

    __slots__ = ("layout", "data")
    __array_ufunc__ = None

    def __init__(self, layout, data, hermitian=False):
        # type: (SpaceLayout, numpy.ndarray, bool) -> None
        matrix = numpy.array(data, dtype=complex)
        expected = (layout.total_dim, layout.total_dim)
        if matrix.shape != expected:
            raise errors.LayoutError.single(
                "operator", "shape {} does not match layout {}".format(
                    matrix.shape, expected
                )
            )
        matrix.flags.writeable = False
        self.layout = layout
        self.data = matrix
        if hermitian and not self.is_hermitian():
            raise errors.NumericalError(
                operation="Operator",
                details="matrix is not Hermitian (deviation {:.3e})".format(
                    numpy.abs(matrix - matrix.conj().T).max()
                ),
            )

    def __repr__(self):
        return make_repr("Operator", self.layout, self.data)

    def _check(self, other):
        # type: (Operator) -> None
        if not isinstance(other, Operator):
            raise TypeError("expected an Operator, got {!r}".format(other))
        if other.layout != self.layout:
            raise errors.LayoutError.single(
                "operator", "layouts differ: {!r} and {!r}".format(
                    self.layout, other.layout
                )
            )

    def __add__(self, other):
        self._check(other)
        return Operator(self.layout, self.data + other.data)

    def __sub__(self, other):
        self._check(other)
        return Operator(self.layout, self.data - other.data)

    def __neg__(self):
        return Operator(self.layout, -self.data)

    def __mul__(self, scalar):
        if not isinstance(scalar, numbers.Number):
            return NotImplemented
        return Operator(self.layout, self.data * scalar)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return Operator(self.layout, self.data / scalar)

    def __matmul__(self, other):
        self._check(other)
        return Operator(self.layout, self.data @ other.data)

    def dag(self):
        # type: () -> Operator
        """Get the Hermitian conjugate."""
        return Operator(self.layout, self.data.conj().T)

    def commutator(self, other):
        # type: (Operator) -> Operator
        """Get ``[self, other]``."""
        return self @ other - other @ self

    def norm(self):
        # type: () -> float
        """Get the Frobenius norm."""
        return float(numpy.linalg.norm(self.data))

    def is_hermitian(self, tolerance=HERMITIAN_TOLERANCE):
        # type: (float) -> bool
        """Check ``max|A - A^dagger| < tolerance * ||A||``."""
        deviation = numpy.abs(self.data - self.data.conj().T).max()
        return bool(deviation <= tolerance * max(self.norm(), 1.0))


def _local_matrix(op, factor, layout):
    # type: (Union[Operator, numpy.ndarray], Factor, SpaceLayout) -> numpy.ndarray
    if isinstance(op, Operator):
        if len(op.layout.factors) != 1 or op.layout.labels[0] is not factor:
            raise errors.LayoutError.single(
                "operator", "expected a single-factor operator on {}".format(factor)
            )
        matrix = op.data
    else:
        matrix = numpy.asarray(op, dtype=complex)
    dim = layout.dim(factor)
    if matrix.shape != (dim, dim):
        raise errors.LayoutError.single(
            "layout.{}".format(factor),
            "local operator shape {} does not match dimension {}".format(
                matrix.shape, dim
            ),
        )
    return matrix


def embed_product(ops, layout):
    # type: (Iterable[Tuple[Union[Operator, numpy.ndarray], FactorLike]], SpaceLayout) -> Operator
    """Embed a product of single-factor operators in the full space.

    Arguments:
        ops (list): ``(operator, label)`` pairs; the operator is either
            a single-factor `Operator` or a square matrix.
        layout (SpaceLayout): the target space.

    Returns:
        Operator: the Kronecker product in layout order, with
        identities on unlisted factors.

    Raises:
        ~uscqed.errors.LayoutError: if a factor is listed twice or is
            absent from the layout.

    """
    local = {}
    for op, label in ops:
        factor = _as_factor(label)
        if factor in local:
            raise errors.LayoutError.single(
                "layout.{}".format(factor), "factor listed more than once"
            )
        local[factor] = _local_matrix(op, factor, layout)
    matrices = [
        local.get(factor, numpy.eye(dim, dtype=complex))
        for factor, dim in layout.factors
    ]
    missing = set(local) - set(layout.labels)
    if missing:
        raise errors.LayoutError.single(
            "layout", "factors {} not in layout".format(sorted(map(str, missing)))
        )
    return Operator(layout, functools.reduce(numpy.kron, matrices))


def embed(matrix, label, layout):
    # type: (Union[Operator, numpy.ndarray], FactorLike, SpaceLayout) -> Operator
    """Embed a single-factor operator in the full space."""
    return embed_product([(matrix, label)], layout)


def identity(layout):
    # type: (SpaceLayout) -> Operator
    """Get the identity operator."""
    return Operator(layout, numpy.eye(layout.total_dim))


def cavity_annihilation_matrix(n_fock):
    # type: (int) -> numpy.ndarray
    """Get the truncated ``n_fock x n_fock`` annihilation matrix."""
    return numpy.diag(numpy.sqrt(numpy.arange(1, n_fock, dtype=float)), k=1).astype(
        complex
    )


def annihilation(layout):
    # type: (SpaceLayout) -> Operator
    """Get the cavity annihilation operator ``a``.

    Raises:
        ~uscqed.errors.LayoutError: if the layout has no cavity.

    """
    if Factor.cavity not in layout:
        raise errors.LayoutError.single("layout.cavity", "layout has no cavity factor")
    return embed(cavity_annihilation_matrix(layout.n_fock), Factor.cavity, layout)


def number(layout):
    # type: (SpaceLayout) -> Operator
    """Get the cavity number operator ``a^dagger a``."""
    a = annihilation(layout)
    return a.dag() @ a


def pauli(layout, which, target):
    # type: (SpaceLayout, Text, FactorLike) -> Operator
    """Get a Pauli or ladder operator on an atomic factor.

    Arguments:
        layout (SpaceLayout): the full space.
        which (str): one of ``x``, ``y``, ``z``, ``plus``, ``minus``.
        target (str or Factor): the atomic factor.

    Raises:
        ~uscqed.errors.LayoutError: if the target is not an atomic
            factor of the layout.
        ValueError: if ``which`` is not a known operator name.

    """
    factor = _as_factor(target)
    if factor is Factor.cavity or factor not in layout:
        raise errors.LayoutError.single(
            "layout.{}".format(factor), "not an atomic factor of {!r}".format(layout)
        )
    try:
        matrix = _PAULI[which]
    except KeyError:
        raise ValueError("unknown Pauli operator {!r}".format(which))
    return embed(matrix, factor, layout)


def bare_excitations(layout):
    # type: (SpaceLayout) -> numpy.ndarray
    """Get the diagonal of ``a^dagger a + sum sigma_plus sigma_minus``."""
    diagonals = []
    for factor, dim in layout.factors:
        diagonals.append(numpy.arange(dim, dtype=float))
    total = diagonals[0]
    for diagonal in diagonals[1:]:
        total = numpy.add.outer(total, diagonal).ravel()
    return total


def operator_function(matrix, func):
    # type: (numpy.ndarray, Callable[[numpy.ndarray], numpy.ndarray]) -> numpy.ndarray
    """Apply a scalar function to a Hermitian matrix.

    The matrix is diagonalised and ``func`` is applied to its
    eigenvalues, which is exact within the truncated space.

    """
    values, vectors = scipy.linalg.eigh(matrix)
    return (vectors * func(values)) @ vectors.conj().T
