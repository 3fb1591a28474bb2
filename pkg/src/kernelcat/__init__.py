"""Finite categories, arrow comonad, kernels and supercoherent nerves."""
