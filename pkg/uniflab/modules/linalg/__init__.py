from uniflab.modules.linalg.gf2poly import (
    GF2Poly, ZERO_POLY, ONE_POLY, poly_matrix, identity, zeros, matmul, matvec, determinant,
)
from uniflab.modules.linalg.snf import (
    SmithForm, GeneralSolution, NoSolution, smith_normal_form, solve_system_snf,
)
