"""Partially-precise computational blocks: sparsity, truth tables, minimization and applications."""
