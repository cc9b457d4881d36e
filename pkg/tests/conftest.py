"""Shared fixtures and CSV helpers for the test suite."""

import numpy as np
import pytest


def read_csv(path):
    """Parse a trace or summary CSV into {column: array}, skipping echo lines."""
    with open(path, encoding="utf-8") as fh:
        lines = [ln for ln in fh if not ln.startswith("#")]
    names = lines[0].strip().split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    return {name: data[:, i] for i, name in enumerate(names)}


@pytest.fixture
def trace_reader():
    return read_csv


@pytest.fixture
def rng():
    return np.random.default_rng(20260815)
