"""qpack test suite."""
