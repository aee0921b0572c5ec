"""Bound-driven control agents for riverswim."""
