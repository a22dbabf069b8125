"""Toroidal arrays and the Pascal/affine tile constructions."""
