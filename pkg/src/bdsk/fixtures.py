"""Small named systems used in documentation, tests and the CLI."""

from __future__ import annotations

from typing import Callable

from .dynamics import RelativeGBDS, make_system


def fx_loop() -> RelativeGBDS:
    """One atom ``v`` with a single loop ``a``."""
    return make_system(["v"], {"a": {"v": ["v"]}})


def fx_on(n: int) -> RelativeGBDS:
    """One atom with ``n`` loops ``a1..an`` (the Cuntz algebra for ``n >= 2``)."""
    if n < 1:
        raise ValueError("need at least one loop")
    return make_system(["v"], {f"a{i}": {"v": ["v"]} for i in range(1, n + 1)})


def fx_arrow() -> RelativeGBDS:
    """Edge ``e`` from ``v`` to the sink ``w``."""
    return make_system(["v", "w"], {"e": {"v": ["w"]}})


def fx_llw() -> RelativeGBDS:
    """Loop ``a`` at ``v``, edge ``b`` from ``v`` to ``w``, loop ``c`` at ``w``."""
    return make_system(
        ["v", "w"],
        {"a": {"v": ["v"]}, "b": {"v": ["w"]}, "c": {"w": ["w"]}},
    )


def fx_toep() -> RelativeGBDS:
    """The single loop with ``J`` trivial (Toeplitz algebra)."""
    return make_system(["v"], {"a": {"v": ["v"]}}, J=[])


def fx_double_loops() -> RelativeGBDS:
    """Two loops at ``v``, an edge ``v -> w`` and two loops at ``w``."""
    return make_system(
        ["v", "w"],
        {
            "a1": {"v": ["v"]},
            "a2": {"v": ["v"]},
            "e": {"v": ["w"]},
            "b1": {"w": ["w"]},
            "b2": {"w": ["w"]},
        },
    )


FIXTURES: dict[str, Callable[[], RelativeGBDS]] = {
    "fx-loop": fx_loop,
    "fx-on2": lambda: fx_on(2),
    "fx-on3": lambda: fx_on(3),
    "fx-arrow": fx_arrow,
    "fx-llw": fx_llw,
    "fx-toep": fx_toep,
    "fx-double-loops": fx_double_loops,
}
