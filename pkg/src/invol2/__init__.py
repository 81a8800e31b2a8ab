"""Orthogonal involutions on totally decomposable algebras in characteristic 2."""

__version__ = "0.1.0"

from .errors import Invol2Error, ParseError, VerificationError, DegreeOverflow  # noqa: E402
from .field import FieldCtx, RatFunc, is_square  # noqa: E402
from .algebra import (  # noqa: E402
    AlgElement,
    StructAlgebra,
    make_matrix_algebra,
    make_quaternion,
    tensor,
)
from .involution import Involution, make_canonical, make_quat_orthogonal, make_transpose  # noqa: E402
from .forms import PfisterForm, i_invariant  # noqa: E402
from .structure import (  # noqa: E402
    DecomposedAlgebra,
    build_inseparable,
    count_witness,
    quat_subalgebra_containing,
    quaternion_factor,
    represents,
    split_factor,
)

__all__ = [
    "AlgElement", "DecomposedAlgebra", "DegreeOverflow", "FieldCtx", "Invol2Error",
    "Involution", "ParseError", "PfisterForm", "RatFunc", "StructAlgebra",
    "VerificationError", "build_inseparable", "count_witness", "i_invariant", "is_square",
    "make_canonical", "make_matrix_algebra", "make_quat_orthogonal", "make_quaternion",
    "make_transpose", "quat_subalgebra_containing", "quaternion_factor", "represents",
    "split_factor", "tensor",
]
