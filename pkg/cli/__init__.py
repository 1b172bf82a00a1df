"""Command-line surface: report, sweep and verify."""
