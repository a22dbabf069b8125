"""Perfectness and nestedness checks, pattern decoder and family census."""
