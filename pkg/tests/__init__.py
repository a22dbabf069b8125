"""Tests for the nested perfect toroidal array toolkit."""
