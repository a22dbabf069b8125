"""Dense linear algebra over GF(2) on word-packed rows."""
