"""File and report helpers."""
