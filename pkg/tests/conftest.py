"""Keeps the tests directory importable (oracles, genhelpers) and pins a
deterministic hypothesis profile so runs are reproducible bit for bit."""

from hypothesis import settings

settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")
