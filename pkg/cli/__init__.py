"""Command-line surface, array files and report serialization."""
