"""Exact linear algebra over Q."""

from ._kernels import backend, integer_rank
from .matrix import NOT_IN_IMAGE, SparseMatrixQ, kernel_basis, rank, solve_in_image

__all__ = ["SparseMatrixQ", "rank", "kernel_basis", "solve_in_image", "NOT_IN_IMAGE",
           "backend", "integer_rank"]
