"""Graph search library and service helpers."""
