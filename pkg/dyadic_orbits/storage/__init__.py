"""Report models and output writers."""
