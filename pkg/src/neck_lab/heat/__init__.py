"""One-dimensional heat equation on an interval: kernel, representation, solver."""

from neck_lab.heat.finite_difference import HeatField, fd_solve, mode_grid
from neck_lab.heat.kernel import (
    DirichletKernel,
    KernelValue,
    boundary_kernel_bound,
    kernel_eval,
    truncation_bound,
    truncation_order,
)
from neck_lab.heat.representation import HeatWindow, representation_solve

__all__ = [
    "DirichletKernel",
    "HeatField",
    "HeatWindow",
    "KernelValue",
    "boundary_kernel_bound",
    "fd_solve",
    "kernel_eval",
    "mode_grid",
    "representation_solve",
    "truncation_bound",
    "truncation_order",
]
