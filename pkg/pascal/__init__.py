"""Pascal triangle matrices modulo 2 and their rotated variants."""
