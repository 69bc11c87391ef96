"""Integration tests: acceptance runs and the CLI end to end."""
