import numpy as np
import pytest

from qdisk.field import PolarGrid
from qdisk.forms import Continuation
from qdisk.minimizer import BoundaryTrace


@pytest.fixture
def grid64():
    return PolarGrid(64, 256)


@pytest.fixture
def grid32():
    return PolarGrid(32, 128)


def single_mode_trace(freq, n=256, amp=1.0):
    """Trace of {+-amp*(cos(freq*th), sin(freq*th))}.

    Integer freq gives two closed loops (unbranched); odd-half freq gives a
    branched trace whose double loop is the same expression over [0, 4*pi).
    """
    th = 2.0 * np.pi * np.arange(n) / n
    p1 = amp * np.stack([np.cos(freq * th), np.sin(freq * th)], axis=1)
    if float(2 * freq).is_integer() and int(round(2 * freq)) % 2 == 1:
        p2 = amp * np.stack(
            [np.cos(freq * (th + 2 * np.pi)), np.sin(freq * (th + 2 * np.pi))], axis=1
        )
    else:
        p2 = -p1
    return BoundaryTrace.from_values(p1, p2)


def _loop_from_modes(thetas, unit, modes, rng):
    vals = np.zeros((len(thetas), 2))
    for k, scale in modes:
        A = rng.normal(size=2) * scale
        B = rng.normal(size=2) * scale
        nu = k * unit
        vals += np.cos(nu * thetas)[:, None] * A + np.sin(nu * thetas)[:, None] * B
    return vals


def random_trace(rng, kind, n=256, kmax=4, mode0=False, min_sep=0.05, odd_only=False):
    """Random band-limited trace of the requested class, sheets separated.

    Redraws until the minimum sheet separation exceeds ``min_sep`` so class
    detection stays unambiguous. ``odd_only`` restricts branched traces to
    sheet-exchanging (odd) double-loop modes, i.e. data with p2 = -p1,
    which leaves a full unit gap between admissible frequencies.
    """
    th = 2.0 * np.pi * np.arange(n) / n
    for _ in range(200):
        if kind is Continuation.IDENTITY:
            modes = [(k, 1.0 / k**2) for k in range(1, kmax + 1)]
            if mode0:
                modes.append((0, 1.0))
            l1 = _loop_from_modes(th, 1.0, modes, rng)
            l2 = _loop_from_modes(th, 1.0, modes, rng)
            # keep the loops apart with opposing constant offsets
            offset = rng.normal(size=2)
            offset *= (1.5 if mode0 else 0.0) / max(np.linalg.norm(offset), 1e-9)
            p1, p2 = l1 + offset, l2 - offset
            if not mode0:
                # separate by distinct dominant rotations instead
                p1 = p1 + np.stack([np.cos(th), np.sin(th)], axis=1)
                p2 = p2 - np.stack([np.cos(th), np.sin(th)], axis=1)
        else:
            cover = np.concatenate([th, th + 2 * np.pi])
            ks = range(1, 2 * kmax + 1, 2) if odd_only else range(1, 2 * kmax + 1)
            modes = [(k, 1.0 / k**1.5) for k in ks]
            if mode0:
                modes.append((0, 1.0))
            # guarantee an odd (sheet-exchanging) mode dominates
            loop = _loop_from_modes(cover, 0.5, modes, rng)
            main = rng.normal(size=2)
            main *= 1.5 / max(np.linalg.norm(main), 1e-9)
            loop += np.cos(0.5 * cover)[:, None] * main
            p1, p2 = loop[:n], loop[n:]
        trace = BoundaryTrace.from_values(p1, p2)
        if trace.separation() > min_sep:
            return trace
    raise RuntimeError("could not draw a separated trace")
