import numpy as np
import pytest

from distilldyn import channels

ACCEPTANCE_RESULTS = {}


def random_complex(rng, n):
    return rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))


def random_hermitian(rng, n):
    x = random_complex(rng, n)
    return x + x.conj().T


def random_density(rng, n, rank=None):
    x = rng.normal(size=(n, rank or n)) + 1j * rng.normal(size=(n, rank or n))
    rho = x @ x.conj().T
    return rho / np.trace(rho)


def random_channel(rng, dim, k=3):
    """Random complete Kraus set from the blocks of a random isometry."""
    x = rng.normal(size=(k * dim, dim)) + 1j * rng.normal(size=(k * dim, dim))
    q, _ = np.linalg.qr(x)
    return channels.KrausChannel(tuple(q[i * dim:(i + 1) * dim] for i in range(k)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_RESULTS):
        ok, text = ACCEPTANCE_RESULTS[number]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {number:2d}. {text}")
