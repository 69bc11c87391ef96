"""Unit tests for qpack."""
