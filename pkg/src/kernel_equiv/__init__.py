"""Decide equivalence of symmetric determinantal kernels and build conjugation witnesses."""

from .decide import (
    CycleObstruction,
    EquivalenceVerdict,
    decide_equivalence,
    enumerate_witnesses,
    normalize_witness,
    orbit_check,
)
from .errors import KernelEquivError
from .fields import FieldSpec, field_equals, field_invert, field_is_own_inverse
from .graph import KernelGraph, Path, build_graph, tree_path
from .kernels import (
    SymmetricKernel,
    conjugate_kernel,
    dump_kernel,
    gen_cd_kernel,
    gen_random_kernel,
    gen_sine_kernel,
    load_kernel,
)
from .oracle import MinorReport, compare_minors, determinant, find_minimal_mismatch
from .transition import (
    TransitionTable,
    ZeroSet,
    build_transition,
    check_necessary,
    kernel_path_product,
    path_product,
)

__version__ = "0.1.0"
